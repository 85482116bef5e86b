#pragma once

#include "ptlab/bipartite.hpp"
#include "ptlab/rng.hpp"
#include "ptlab/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace ptlab {

enum class Ensemble { induced_wishart, induced_trace, mixture };

inline std::string_view to_string(Ensemble e) {
  switch (e) {
    case Ensemble::induced_wishart: return "wishart";
    case Ensemble::induced_trace: return "trace";
    case Ensemble::mixture: return "mixture";
  }
  return "unknown";
}

/// Accepts the CLI spellings (wishart, trace, mixture) and the long forms.
inline Ensemble parse_ensemble(std::string_view name) {
  if (name == "wishart" || name == "induced_wishart") return Ensemble::induced_wishart;
  if (name == "trace" || name == "induced_trace") return Ensemble::induced_trace;
  if (name == "mixture") return Ensemble::mixture;
  throw InvalidArgument("unknown ensemble '" + std::string(name) + "'");
}

/// n x s matrix of independent complex Gaussians with E|g|^2 = variance.
template <ComplexGaussianSource G>
ComplexMatrix sample_ginibre(int n, int s, G& rng, double variance = 1.0) {
  require(n >= 1 && s >= 1, "Ginibre dimensions must be positive");
  require(variance > 0.0, "Ginibre variance must be positive");
  const double scale = std::sqrt(variance);
  ComplexMatrix g(n, s);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < s; ++j) g(i, j) = scale * Complex(rng.complex_normal());
  return g;
}

namespace detail {

inline DensityMatrix normalized_gram(const ComplexMatrix& factor, const Split& split) {
  ComplexMatrix w = ComplexMatrix::Zero(factor.rows(), factor.rows());
  w.selfadjointView<Eigen::Lower>().rankUpdate(factor);
  make_hermitian_from_lower(w);
  const double trace = w.diagonal().real().sum();
  if (!(trace > 0.0) || !std::isfinite(trace))
    throw NumericalFailure("degenerate draw: tr(G G^dagger) = " + std::to_string(trace));
  w /= trace;
  return {std::move(w), split};
}

inline void require_sampler_args(int n, int s, const Split& split) {
  require(n >= 1, "state dimension must be positive");
  require(s >= 1, "ancilla dimension must be positive");
  require(split.d1 >= 1 && split.d2 >= 1 && split.dim() == n,
          "split d1*d2 must equal n = " + std::to_string(n));
}

}  // namespace detail

/// rho = G G^dagger / tr(G G^dagger), G an n x s Ginibre matrix. Distributed
/// as the induced measure mu_{n,s}. `variance` only exists to check that the
/// Gaussian scale drops out.
template <ComplexGaussianSource G>
DensityMatrix sample_induced_state_wishart(int n, int s, const Split& split, G& rng,
                                           double variance = 1.0) {
  detail::require_sampler_args(n, s, split);
  return detail::normalized_gram(sample_ginibre(n, s, rng, variance), split);
}

/// Uniformly distributed unit vector: a normalized complex Gaussian vector.
template <ComplexGaussianSource G>
PureState sample_pure_state(int dim, G& rng) {
  require(dim >= 1, "pure state dimension must be positive");
  ComplexVector psi(dim);
  for (int i = 0; i < dim; ++i) psi(i) = rng.complex_normal();
  const double norm = psi.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw NumericalFailure("degenerate draw: zero Gaussian vector");
  psi /= norm;
  return {std::move(psi)};
}

/// rho = tr_{C^s} |psi><psi| with psi uniform on the unit sphere of C^n (x) C^s.
template <ComplexGaussianSource G>
DensityMatrix sample_induced_state_trace(int n, int s, const Split& split, G& rng) {
  detail::require_sampler_args(n, s, split);
  const PureState psi = sample_pure_state(n * s, rng);
  return {partial_trace_pure(psi.amplitudes, Split{n, s}), split};
}

/// (1/s) sum_i |psi_i><psi_i| over s independent uniform pure states on C^n.
template <ComplexGaussianSource G>
DensityMatrix sample_mixture_state(int n, int s, const Split& split, G& rng) {
  detail::require_sampler_args(n, s, split);
  ComplexMatrix columns(n, s);
  for (int j = 0; j < s; ++j) columns.col(j) = sample_pure_state(n, rng).amplitudes;
  // Normalizing by the trace rather than by s only removes rounding: each
  // column has unit norm, so tr = s up to an ulp or so.
  return detail::normalized_gram(columns, split);
}

template <ComplexGaussianSource G>
DensityMatrix sample_state(Ensemble ensemble, int n, int s, const Split& split, G& rng) {
  switch (ensemble) {
    case Ensemble::induced_wishart: return sample_induced_state_wishart(n, s, split, rng);
    case Ensemble::induced_trace: return sample_induced_state_trace(n, s, split, rng);
    case Ensemble::mixture: return sample_mixture_state(n, s, split, rng);
  }
  throw InvalidArgument("unknown ensemble");
}

/// Unnormalized log-density of mu_{n,s} with respect to Hilbert-Schmidt
/// volume: (s - n) log det rho. Defined for s >= n only.
inline double density_log_weight(const DensityMatrix& rho, int s) {
  const int n = rho.dim();
  require(s >= n, "the induced density exists only for s >= n");
  if (s == n) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda <= 0.0) return -std::numeric_limits<double>::infinity();
    log_det += std::log(lambda);
  }
  return static_cast<double>(s - n) * log_det;
}

struct DensityCheck {
  double hermiticity = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok(double herm_tol = 1e-12, double trace_tol = 1e-12, double psd_tol = 1e-10) const {
    return hermiticity <= herm_tol && trace_error <= trace_tol && min_eigenvalue >= -psd_tol;
  }
};

/// Measures how far a matrix is from being a density matrix.
inline DensityCheck check_density_matrix(const DensityMatrix& rho) {
  DensityCheck c;
  c.hermiticity = hermiticity_defect(rho.entries);
  c.trace_error = std::abs(rho.entries.trace() - Complex(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  c.min_eigenvalue = solver.eigenvalues()(0);
  return c;
}

}  // namespace ptlab
