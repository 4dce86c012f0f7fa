#include "bnvar/variability.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "bnvar/linalg.hpp"

namespace bnvar {

VariabilityReport variability(MatrixRef sigma, bool reduce_for_det, double reduce_tol) {
    VariabilityReport r;
    const int k = static_cast<int>(sigma.rows());
    r.k = k;

    r.var_t = trace_sym(sigma);

    if (reduce_for_det) {
        FullRankReduction red = full_rank_reduce(sigma, reduce_tol);
        r.used_reduction = true;
        r.k_star = static_cast<int>(red.kept.size());
        r.kept_indices = red.kept;
        if (r.k_star == 0) {
            // Zero matrix: the determinant statistic is exactly zero.
            r.var_g = 0.0;
            r.nvar_g = 0.0;
        } else {
            r.var_g = det_sym(red.reduced);
            r.nvar_g = std::pow(4.0, r.k_star) * r.var_g;
        }
    } else {
        r.var_g = det_sym(sigma);
        r.nvar_g = std::pow(4.0, k) * r.var_g;
    }

    // Squared Frobenius distance from (k/4) I equals the eigenvalue form
    // sum_i (lambda_i - k/4)^2 for symmetric input.
    const double c = static_cast<double>(k) / 4.0;
    Matrix centered = sigma;
    centered.diagonal().array() -= c;
    r.var_n = centered.squaredNorm();

    const double kd = static_cast<double>(k);
    r.nvar_t = k > 0 ? 4.0 * r.var_t / kd : 0.0;
    r.nvar_n = k > 0 ? (kd * kd * kd - 16.0 * r.var_n) / (kd * (2.0 * kd - 1.0)) : 0.0;
    r.cvar_t = 1.0 - r.nvar_t;
    r.cvar_g = 1.0 - r.nvar_g;
    r.cvar_n = 1.0 - r.nvar_n;

    const double slack = 1e-12;
    double diag_max = k > 0 ? sigma.diagonal().maxCoeff() : 0.0;
    double diag_min = k > 0 ? sigma.diagonal().minCoeff() : 0.0;
    r.out_of_bounds = diag_max > 0.25 + slack || diag_min < -slack ||
                      r.var_t > kd / 4.0 + slack || r.var_t < -slack ||
                      r.nvar_g > 1.0 + slack || r.nvar_g < -slack ||
                      r.nvar_n > 1.0 + slack || r.nvar_n < -slack;
    return r;
}

namespace {

void put(std::ostream& out, const char* key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out << key << '=' << buf << '\n';
}

} // namespace

void VariabilityReport::write_key_values(std::ostream& out) const {
    out << "k=" << k << '\n';
    put(out, "var_t", var_t);
    put(out, "var_g", var_g);
    put(out, "var_n", var_n);
    put(out, "nvar_t", nvar_t);
    put(out, "nvar_g", nvar_g);
    put(out, "nvar_n", nvar_n);
    put(out, "cvar_t", cvar_t);
    put(out, "cvar_g", cvar_g);
    put(out, "cvar_n", cvar_n);
    out << "used_reduction=" << (used_reduction ? 1 : 0) << '\n';
    if (used_reduction) {
        out << "k_star=" << k_star << '\n';
        out << "kept=";
        for (size_t i = 0; i < kept_indices.size(); ++i) {
            if (i) out << ' ';
            out << kept_indices[i];
        }
        out << '\n';
    }
    out << "out_of_bounds=" << (out_of_bounds ? 1 : 0) << '\n';
}

const char* VariabilityReport::csv_header() {
    return "k,var_t,var_g,var_n,nvar_t,nvar_g,nvar_n,cvar_t,cvar_g,cvar_n,"
           "used_reduction,k_star,out_of_bounds";
}

void VariabilityReport::write_csv_row(std::ostream& out) const {
    char buf[64];
    out << k;
    for (double v : {var_t, var_g, var_n, nvar_t, nvar_g, nvar_n, cvar_t, cvar_g, cvar_n}) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << ',' << buf;
    }
    out << ',' << (used_reduction ? 1 : 0) << ',' << k_star << ',' << (out_of_bounds ? 1 : 0)
        << '\n';
}

} // namespace bnvar
