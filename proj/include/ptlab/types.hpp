#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace ptlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Bad arguments or configuration. The CLI maps this to exit code 2.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Sampling, eigensolver or quadrature failure. The CLI maps this to exit code 3.
class NumericalFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Dimensions of the two tensor factors of C^{d1} (x) C^{d2}.
struct Split {
  int d1 = 1;
  int d2 = 1;

  int dim() const noexcept { return d1 * d2; }
  friend bool operator==(const Split&, const Split&) = default;
};

inline Split balanced_split(int d) noexcept { return {d, d}; }

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

inline void require_split(const ComplexMatrix& m, const Split& split) {
  require(split.d1 >= 1 && split.d2 >= 1, "split factors must be positive");
  require(m.rows() == m.cols(), "matrix must be square");
  require(m.rows() == split.dim(), "matrix dimension " + std::to_string(m.rows()) +
                                       " does not match split " + std::to_string(split.d1) +
                                       "x" + std::to_string(split.d2));
}

/// Unit vector in C^dim.
struct PureState {
  ComplexVector amplitudes;

  int dim() const noexcept { return static_cast<int>(amplitudes.size()); }
};

/// A state on C^{d1} (x) C^{d2}: Hermitian, PSD, trace one. The samplers
/// guarantee these properties; check_density_matrix() verifies them.
struct DensityMatrix {
  ComplexMatrix entries;
  Split split;

  int dim() const noexcept { return static_cast<int>(entries.rows()); }
};

/// Largest entrywise deviation from Hermiticity, max |m(i,j) - conj(m(j,i))|.
inline double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Overwrites the strict upper triangle with the adjoint of the lower one and
/// zeroes the imaginary part of the diagonal.
inline void make_hermitian_from_lower(ComplexMatrix& m) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    m(j, j) = Complex(m(j, j).real(), 0.0);
    for (Eigen::Index i = j + 1; i < n; ++i) m(j, i) = std::conj(m(i, j));
  }
}

}  // namespace ptlab
