#pragma once

#include <vector>

#include "bnvar/types.hpp"

namespace bnvar {

/// Eigenvalues of a symmetric matrix, sorted descending.
struct EigenDecomposition {
    Vector eigenvalues;
};

/// Eigenvalues of a symmetric matrix.  The input must be symmetric within
/// `sym_tol` (element-wise, relative to the largest entry); values come back
/// sorted descending.
EigenDecomposition eigenvalues_sym(MatrixRef m, double sym_tol = 1e-12);

/// Determinant of a symmetric matrix via pivoted LDL^T.  Tiny negative
/// results from rounding (within 1e-12) are clamped to zero, since rank
/// deficient covariance matrices legitimately have determinant zero.
double det_sym(MatrixRef m);

double trace_sym(MatrixRef m);

struct FullRankReduction {
    Matrix reduced;               // principal submatrix on `kept`, positive definite
    std::vector<int> kept;        // ascending indices; empty for the zero matrix
};

/// Greedy pivoted-Cholesky selection of a full-rank principal submatrix.
/// Indices are kept largest-remaining-pivot first until the next pivot drops
/// below tol * (largest diagonal entry of the input); ties break on the
/// lowest index.  A zero matrix reduces to the empty selection.
FullRankReduction full_rank_reduce(MatrixRef m, double tol = 1e-9);

} // namespace bnvar
