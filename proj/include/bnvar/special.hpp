#pragma once

#include <cmath>
#include <limits>

#include "bnvar/types.hpp"

namespace bnvar {

namespace detail {

// Series expansion of P(a, x), valid and fast for x < a + 1.
inline double lower_gamma_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 10000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-17)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw NumericError("incomplete gamma series failed to converge");
}

// Modified Lentz continued fraction for Q(a, x), valid for x >= a + 1.
inline double upper_gamma_cf(double a, double x) {
    const double fpmin = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-17)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw NumericError("incomplete gamma continued fraction failed to converge");
}

} // namespace detail

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
inline double reg_lower_inc_gamma(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("reg_lower_inc_gamma: a must be > 0");
    if (!(x >= 0.0)) throw std::invalid_argument("reg_lower_inc_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::lower_gamma_series(a, x);
    return 1.0 - detail::upper_gamma_cf(a, x);
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
inline double reg_upper_inc_gamma(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("reg_upper_inc_gamma: a must be > 0");
    if (!(x >= 0.0)) throw std::invalid_argument("reg_upper_inc_gamma: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::lower_gamma_series(a, x);
    return detail::upper_gamma_cf(a, x);
}

/// Standard normal CDF, evaluated through the complementary error function.
inline double std_normal_cdf(double z) {
    if (std::isnan(z)) throw std::invalid_argument("std_normal_cdf: z is NaN");
    return 0.5 * std::erfc(-z * M_SQRT1_2);
}

/// Chi-square CDF with df degrees of freedom.
inline double chi2_cdf(double df, double x) {
    return reg_lower_inc_gamma(0.5 * df, 0.5 * x);
}

/// Chi-square upper tail.
inline double chi2_sf(double df, double x) {
    return reg_upper_inc_gamma(0.5 * df, 0.5 * x);
}

/// Gamma(shape, scale 1) CDF.
inline double gamma_cdf(double shape, double x) {
    return reg_lower_inc_gamma(shape, x);
}

} // namespace bnvar
