#include "bnvar/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace bnvar {

namespace {

void require_symmetric(MatrixRef m, double tol, const char* who) {
    if (m.rows() != m.cols())
        throw std::invalid_argument(std::string(who) + ": matrix is not square");
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m.cols(); ++j)
            if (std::fabs(m(i, j) - m(j, i)) > tol * scale)
                throw std::invalid_argument(std::string(who) + ": matrix is not symmetric");
}

} // namespace

EigenDecomposition eigenvalues_sym(MatrixRef m, double sym_tol) {
    require_symmetric(m, sym_tol, "eigenvalues_sym");
    if (m.rows() == 0) return {Vector(0)};
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigenvalues_sym: eigensolver did not converge");
    Vector ev = solver.eigenvalues();
    std::sort(ev.data(), ev.data() + ev.size(), std::greater<double>());
    return {std::move(ev)};
}

double det_sym(MatrixRef m) {
    require_symmetric(m, 1e-12, "det_sym");
    if (m.rows() == 0) return 1.0;
    Eigen::LDLT<Matrix> ldlt(m);
    double det = ldlt.vectorD().prod();
    if (det < 0.0 && det > -1e-12) det = 0.0;
    return det;
}

double trace_sym(MatrixRef m) {
    require_symmetric(m, 1e-12, "trace_sym");
    return m.trace();
}

FullRankReduction full_rank_reduce(MatrixRef m, double tol) {
    require_symmetric(m, 1e-9, "full_rank_reduce");
    const Eigen::Index k = m.rows();
    FullRankReduction out;
    if (k == 0) {
        out.reduced = Matrix(0, 0);
        return out;
    }

    Matrix residual = m;
    std::vector<bool> taken(static_cast<size_t>(k), false);
    const double max_diag = m.diagonal().maxCoeff();
    const double threshold = tol * max_diag;

    for (Eigen::Index step = 0; step < k; ++step) {
        int pivot = -1;
        double best = 0.0;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (taken[static_cast<size_t>(i)]) continue;
            double d = residual(i, i);
            if (pivot < 0 || d > best) {
                best = d;
                pivot = static_cast<int>(i);
            }
        }
        if (pivot < 0 || best <= threshold || best <= 0.0) break;

        taken[static_cast<size_t>(pivot)] = true;
        out.kept.push_back(pivot);

        // Schur-complement downdate of the residual on remaining indices.
        Vector col = residual.col(pivot);
        for (Eigen::Index i = 0; i < k; ++i) {
            if (taken[static_cast<size_t>(i)]) continue;
            for (Eigen::Index j = 0; j < k; ++j) {
                if (taken[static_cast<size_t>(j)]) continue;
                residual(i, j) -= col(i) * col(j) / best;
            }
        }
    }

    std::sort(out.kept.begin(), out.kept.end());
    const auto n = static_cast<Eigen::Index>(out.kept.size());
    out.reduced = Matrix(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            out.reduced(a, b) = m(out.kept[static_cast<size_t>(a)], out.kept[static_cast<size_t>(b)]);
    return out;
}

} // namespace bnvar
