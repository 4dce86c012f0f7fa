#include "bnvar/cov_tests.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "bnvar/linalg.hpp"
#include "bnvar/special.hpp"

namespace bnvar {

const char* to_string(CovTestKind kind) {
    switch (kind) {
        case CovTestKind::Trace: return "trace";
        case CovTestKind::DetGaussian: return "det-gauss";
        case CovTestKind::DetGamma: return "det-gamma";
        case CovTestKind::NagaoFrobenius: return "nagao";
    }
    return "?";
}

namespace {

void require_m(long m) {
    if (m < 1) throw std::invalid_argument("covariance test: m must be >= 1");
}

void require_k(MatrixRef sigma) {
    if (sigma.rows() < 1) throw std::invalid_argument("covariance test: empty matrix");
}

} // namespace

CovTestResult trace_test(MatrixRef sigma_hat, long m) {
    require_m(m);
    require_k(sigma_hat);
    CovTestResult r;
    r.kind = CovTestKind::Trace;
    r.m = m;
    r.k = static_cast<int>(sigma_hat.rows());
    const double md = static_cast<double>(m), kd = r.k;

    r.statistic = 4.0 * md * trace_sym(sigma_hat);
    const double df = md * kd;
    r.reference = {Reference::Family::ChiSquare, df, 0.0};
    r.support_lo = 0.0;
    r.support_hi = md * kd;

    r.p_raw = chi2_cdf(df, std::max(0.0, r.statistic));
    double t = r.statistic;
    if (t < r.support_lo || t > r.support_hi) {
        r.outside_support = true;
        t = std::clamp(t, r.support_lo, r.support_hi);
    }
    r.p_corrected = chi2_cdf(df, t) / chi2_cdf(df, r.support_hi);
    return r;
}

CovTestResult det_gaussian_test(MatrixRef sigma_hat, long m) {
    require_m(m);
    require_k(sigma_hat);
    CovTestResult r;
    r.kind = CovTestKind::DetGaussian;
    r.m = m;
    r.k = static_cast<int>(sigma_hat.rows());
    const double md = static_cast<double>(m), kd = r.k;

    const double det_ratio = std::pow(4.0, kd) * det_sym(sigma_hat);
    r.statistic = std::sqrt(md) * (det_ratio - 1.0);
    const double sd = std::sqrt(2.0 * kd);
    r.reference = {Reference::Family::Normal, 0.0, 2.0 * kd};
    r.support_lo = -std::sqrt(md);
    r.support_hi = 0.0;

    r.p_raw = std_normal_cdf(r.statistic / sd);
    double t = r.statistic;
    if (t < r.support_lo || t > r.support_hi) {
        r.outside_support = true;
        t = std::clamp(t, r.support_lo, r.support_hi);
    }
    const double lo = std_normal_cdf(r.support_lo / sd);
    r.p_corrected = (std_normal_cdf(t / sd) - lo) / (0.5 - lo);
    return r;
}

CovTestResult det_gamma_test(MatrixRef sigma_hat, long m) {
    require_m(m);
    require_k(sigma_hat);
    CovTestResult r;
    r.kind = CovTestKind::DetGamma;
    r.m = m;
    r.k = static_cast<int>(sigma_hat.rows());
    const double md = static_cast<double>(m), kd = r.k;

    const double shape = kd * (md + 1.0 - kd) / 2.0;
    if (shape <= 0.0)
        throw std::invalid_argument("det_gamma_test: k(m+1-k)/2 must be positive (m + 1 > k)");

    const double det_ratio = std::pow(4.0, kd) * std::max(0.0, det_sym(sigma_hat));
    r.statistic = md * kd / 2.0 * std::pow(det_ratio, 1.0 / kd);
    r.reference = {Reference::Family::Gamma, shape, 1.0};
    r.support_lo = 0.0;
    r.support_hi = md * kd / 2.0;

    r.p_raw = gamma_cdf(shape, std::max(0.0, r.statistic));
    double t = r.statistic;
    if (t < r.support_lo || t > r.support_hi) {
        r.outside_support = true;
        t = std::clamp(t, r.support_lo, r.support_hi);
    }
    r.p_corrected = gamma_cdf(shape, t) / gamma_cdf(shape, r.support_hi);
    return r;
}

CovTestResult nagao_test(MatrixRef sigma_hat, long m) {
    require_m(m);
    require_k(sigma_hat);
    CovTestResult r;
    r.kind = CovTestKind::NagaoFrobenius;
    r.m = m;
    r.k = static_cast<int>(sigma_hat.rows());
    const double md = static_cast<double>(m), kd = r.k;

    Matrix scaled = 4.0 * sigma_hat;
    scaled.diagonal().array() -= 1.0;
    r.statistic = md / 2.0 * (scaled * scaled).trace();

    const double df = kd * (kd + 1.0) / 2.0;
    r.reference = {Reference::Family::ChiSquare, df, 0.0};
    // Upper support point of the statistic over valid covariance matrices:
    // attained when all mass sits in one eigenvalue of size k/4 (for k >= 2),
    // or at the zero matrix when k = 1.
    r.support_lo = 0.0;
    r.support_hi = md * kd / 2.0 * std::max(kd - 1.0, 1.0);

    r.p_raw = chi2_sf(df, std::max(0.0, r.statistic));
    double t = r.statistic;
    if (t < r.support_lo || t > r.support_hi) {
        r.outside_support = true;
        t = std::clamp(t, r.support_lo, r.support_hi);
    }
    const double tail_beyond = chi2_sf(df, r.support_hi);
    r.p_corrected = (chi2_sf(df, t) - tail_beyond) / chi2_cdf(df, r.support_hi);
    return r;
}

const char* cov_test_csv_header() {
    return "kind,m,k,statistic,p_raw,p_corrected,bounds_flag";
}

void write_csv_row(const CovTestResult& r, std::ostream& out) {
    char buf[64];
    out << to_string(r.kind) << ',' << r.m << ',' << r.k;
    for (double v : {r.statistic, r.p_raw, r.p_corrected}) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << ',' << buf;
    }
    out << ',' << (r.outside_support ? 1 : 0) << '\n';
}

} // namespace bnvar
