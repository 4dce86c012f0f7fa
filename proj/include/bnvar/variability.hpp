#pragma once

#include <iosfwd>
#include <vector>

#include "bnvar/types.hpp"

namespace bnvar {

/// Raw, normalized and complement forms of the three dispersion summaries of
/// an edge covariance matrix: trace, determinant, and squared Frobenius
/// distance from (k/4) I.
struct VariabilityReport {
    int k = 0;
    double var_t = 0, var_g = 0, var_n = 0;
    double nvar_t = 0, nvar_g = 0, nvar_n = 0;
    double cvar_t = 0, cvar_g = 0, cvar_n = 0;

    bool used_reduction = false;     // determinant taken on a reduced matrix
    int k_star = 0;                  // reduced dimension when used_reduction
    std::vector<int> kept_indices;   // indices of the reduced submatrix
    bool out_of_bounds = false;      // some statistic left its population range

    void write_key_values(std::ostream& out) const;
    static const char* csv_header();
    void write_csv_row(std::ostream& out) const;
};

/// Dispersion summaries of a covariance matrix.  With `reduce_for_det` the
/// determinant is computed on the full-rank reduction and normalized with
/// 4^(k*) where k* is the reduced dimension (reported in the result).
/// Sample covariance matrices may legitimately leave the population bounds;
/// values are reported unclamped and flagged.
VariabilityReport variability(MatrixRef sigma, bool reduce_for_det = false,
                              double reduce_tol = 1e-9);

} // namespace bnvar
