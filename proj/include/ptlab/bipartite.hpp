#pragma once

#include "ptlab/types.hpp"

#include <Eigen/Eigenvalues>

namespace ptlab {

enum class Factor { first, second };

/// Partial transpose on C^{d1} (x) C^{d2}.
///
/// With Factor::second (the default) each d2 x d2 block of the d1 x d1 block
/// grid is transposed in place, i.e. (A (x) B)^G = A (x) B^T. Factor::first
/// transposes the block grid instead; the two results are related by a full
/// transpose, so they share a spectrum.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, const Split& split,
                                       Factor factor = Factor::second) {
  require_split(m, split);
  const int d1 = split.d1;
  const int d2 = split.d2;
  ComplexMatrix out(m.rows(), m.cols());
  for (int i1 = 0; i1 < d1; ++i1)
    for (int j1 = 0; j1 < d1; ++j1)
      for (int a = 0; a < d2; ++a)
        for (int b = 0; b < d2; ++b) {
          if (factor == Factor::second)
            out(i1 * d2 + a, j1 * d2 + b) = m(i1 * d2 + b, j1 * d2 + a);
          else
            out(i1 * d2 + a, j1 * d2 + b) = m(j1 * d2 + a, i1 * d2 + b);
        }
  return out;
}

inline ComplexMatrix partial_transpose(const DensityMatrix& rho, Factor factor = Factor::second) {
  return partial_transpose(rho.entries, rho.split, factor);
}

/// Partial trace of an operator on C^{d1} (x) C^{d2}. Tracing out the second
/// factor yields a d1 x d1 operator, tracing out the first a d2 x d2 one.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const Split& split, bool over_second) {
  require_split(m, split);
  const int d1 = split.d1;
  const int d2 = split.d2;
  if (over_second) {
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        for (int k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (int a = 0; a < d2; ++a)
    for (int b = 0; b < d2; ++b)
      for (int k = 0; k < d1; ++k) out(a, b) += m(k * d2 + a, k * d2 + b);
  return out;
}

/// tr_2 |psi><psi| for psi in C^{d1} (x) C^{d2}, without forming the
/// (d1 d2)^2 projector: reshape psi into the d1 x d2 coefficient matrix C
/// and return C C^dagger. The result is exactly Hermitian.
inline ComplexMatrix partial_trace_pure(const ComplexVector& psi, const Split& split) {
  require(split.d1 >= 1 && split.d2 >= 1, "split factors must be positive");
  require(psi.size() == split.dim(), "state dimension does not match split");
  // psi index is i * d2 + k; Eigen's default column-major storage makes the
  // d2 x d1 map the transpose of the coefficient matrix.
  const Eigen::Map<const ComplexMatrix> coeffs_t(psi.data(), split.d2, split.d1);
  ComplexMatrix out = ComplexMatrix::Zero(split.d1, split.d1);
  out.selfadjointView<Eigen::Lower>().rankUpdate(coeffs_t.transpose());
  make_hermitian_from_lower(out);
  return out;
}

struct PptResult {
  bool ppt = false;
  double lambda_min = 0.0;
};

/// Smallest eigenvalue of the partial transpose and whether it clears -tol.
inline PptResult is_ppt(const DensityMatrix& rho, double tol = 1e-10) {
  require(tol >= 0.0, "PPT tolerance must be nonnegative");
  const ComplexMatrix pt = partial_transpose(rho);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(pt, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("eigensolver did not converge on partial transpose");
  const double lambda_min = solver.eigenvalues()(0);
  return {lambda_min >= -tol, lambda_min};
}

/// Exact separability test where PPT and separability coincide (2x2, 2x3,
/// 3x2). Any other split is refused: there the PPT set is strictly larger.
inline bool is_separable_small(const DensityMatrix& rho, double tol = 1e-10) {
  const Split s = rho.split;
  const bool small = (s == Split{2, 2}) || (s == Split{2, 3}) || (s == Split{3, 2});
  require(small, "separability is only decided for 2x2, 2x3 and 3x2 systems");
  return is_ppt(rho, tol).ppt;
}

}  // namespace ptlab
