#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace bnvar {

using Scalar = double;
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using MatrixRef = Eigen::Ref<const Matrix>;
using VectorRef = Eigen::Ref<const Vector>;

/// Input that cannot be parsed; carries a 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line = -1)
        : std::runtime_error(line >= 0 ? what + " at line " + std::to_string(line) : what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

/// Numerical failure (non-convergence, invalid domain reached at runtime).
class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bnvar
