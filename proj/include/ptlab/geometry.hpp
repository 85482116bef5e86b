#pragma once

#include "ptlab/bipartite.hpp"
#include "ptlab/ensembles.hpp"
#include "ptlab/parallel.hpp"
#include "ptlab/rng.hpp"
#include "ptlab/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

// Convex geometry of the separable set S inside the affine space of trace-one
// Hermitian operators, with the maximally mixed state as origin. Directions
// are traceless Hermitian matrices of unit Hilbert-Schmidt norm; the pairing
// is <x, y> = Re tr(x y).

namespace ptlab {

struct Direction {
  ComplexMatrix entries;

  int dim() const noexcept { return static_cast<int>(entries.rows()); }
};

struct WidthEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int num_directions = 0;
  std::uint64_t seed = 0;
};

/// Real Hilbert-Schmidt pairing of two Hermitian matrices.
inline double hs_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x.array() * y.array().conjugate()).real().sum();
}

/// Uniform direction on the unit sphere of the traceless hyperplane: a GUE
/// matrix (isotropic Gaussian in Hilbert-Schmidt coordinates), projected onto
/// trace zero and normalized.
template <ComplexGaussianSource G>
Direction sample_direction(int n, G& rng) {
  require(n >= 2, "directions need dimension n >= 2");
  const ComplexMatrix g = sample_ginibre(n, n, rng);
  ComplexMatrix h = 0.5 * (g + g.adjoint());
  const Complex shift = h.trace() / static_cast<double>(n);
  h.diagonal().array() -= shift;
  make_hermitian_from_lower(h);
  const double norm = h.norm();
  if (!(norm > 0.0)) throw NumericalFailure("degenerate direction draw");
  h /= norm;
  return {std::move(h)};
}

/// Projects a traceless Hermitian matrix onto the unit sphere. Used to build
/// directions from explicit operators such as P - I/n.
inline Direction make_direction(const ComplexMatrix& x) {
  require(x.rows() == x.cols() && x.rows() >= 2, "direction must be a square matrix of size >= 2");
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  require(hermiticity_defect(x) <= 1e-12 * scale, "direction must be Hermitian");
  require(std::abs(x.trace()) <= 1e-12 * scale * x.rows(), "direction must be traceless");
  const double norm = x.norm();
  require(norm > 0.0, "direction must be nonzero");
  return {x / norm};
}

namespace detail {

// <b| u |b> contracted on the second factor: (d x d) operator on the first.
inline ComplexMatrix contract_second(const ComplexMatrix& u, const ComplexVector& b, int d) {
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) acc += std::conj(b(k)) * u(i * d + k, j * d + l) * b(l);
      out(i, j) = acc;
    }
  return out;
}

inline ComplexMatrix contract_first(const ComplexMatrix& u, const ComplexVector& a, int d) {
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      Complex acc = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) acc += std::conj(a(i)) * u(i * d + k, j * d + l) * a(j);
      out(k, l) = acc;
    }
  return out;
}

struct TopEigen {
  double value;
  ComplexVector vector;
};

inline TopEigen top_eigenpair(const ComplexMatrix& m) {
  ComplexMatrix h = m;
  make_hermitian_from_lower(h);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  const auto last = solver.eigenvalues().size() - 1;
  return {solver.eigenvalues()(last), solver.eigenvectors().col(last)};
}

}  // namespace detail

struct SupportEstimate {
  double value = 0.0;
  int best_restart = 0;
  // Restarts whose local optimum matched the best value to 1e-9; a count
  // close to `restarts` indicates the maximization has saturated.
  int restarts_at_best = 0;
};

/// Lower bound on h_S(u) = max over separable states of <rho, u>, found by
/// alternating maximization over product vectors a (x) b. Each restart draws a
/// random b from `rng`; the first k restarts are the same for any total
/// restart count, so the estimate is monotone in `restarts`.
template <ComplexGaussianSource G>
SupportEstimate support_separable_detailed(const Direction& u, int d, int restarts, G& rng,
                                           int max_sweeps = 1000) {
  require(d >= 1 && u.dim() == d * d, "direction dimension must equal d^2");
  require(restarts >= 1, "at least one restart is required");
  SupportEstimate best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<double> local(restarts);
  for (int r = 0; r < restarts; ++r) {
    ComplexVector b = sample_pure_state(d, rng).amplitudes;
    double value = -std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      const detail::TopEigen ea = detail::top_eigenpair(detail::contract_second(u.entries, b, d));
      const detail::TopEigen eb = detail::top_eigenpair(detail::contract_first(u.entries, ea.vector, d));
      b = eb.vector;
      const double improvement = eb.value - value;
      value = eb.value;
      if (improvement < 1e-12) break;
    }
    local[r] = value;
    if (value > best.value) {
      best.value = value;
      best.best_restart = r;
    }
  }
  for (double v : local)
    if (v >= best.value - 1e-9) ++best.restarts_at_best;
  return best;
}

template <ComplexGaussianSource G>
double support_separable(const Direction& u, int d, int restarts, G& rng) {
  return support_separable_detailed(u, d, restarts, rng).value;
}

/// h_D(u) for the full state set: the largest eigenvalue of u.
inline double support_state_set(const Direction& u) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(u.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

/// Whether I/4 + x is a separable state on C^2 (x) C^2: it must be PSD and
/// PPT, which together are exact there.
inline bool is_separable_offset_2x2(const ComplexMatrix& x) {
  DensityMatrix rho{ComplexMatrix::Identity(4, 4) * 0.25 + x, Split{2, 2}};
  make_hermitian_from_lower(rho.entries);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  if (solver.eigenvalues()(0) < 0.0) return false;
  return is_ppt(rho, 0.0).ppt;
}

/// Gauge ||x||_K of K = S - I/4 on C^2 (x) C^2, by bisection on t over
/// [0, 1e6]: the smallest t with I/4 + x/t separable.
inline double gauge_separable_2x2(const ComplexMatrix& x, double precision = 1e-8) {
  require(x.rows() == 4 && x.cols() == 4, "gauge is implemented for 4x4 operators only");
  require(precision > 0.0, "bisection precision must be positive");
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  require(hermiticity_defect(x) <= 1e-12 * scale, "gauge argument must be Hermitian");
  require(std::abs(x.trace()) <= 1e-12 * scale * 4, "gauge argument must be traceless");
  if (x.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  constexpr double kCap = 1e6;
  auto member = [&x](double t) { return is_separable_offset_2x2(x / t); };
  if (!member(kCap)) throw NumericalFailure("gauge bisection: point not in the body below the cap");
  double lo = 0.0;
  double hi = kCap;
  while (hi - lo > precision) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (member(mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

inline WidthEstimate summarize(const std::vector<double>& values, std::uint64_t seed) {
  WidthEstimate w;
  w.num_directions = static_cast<int>(values.size());
  w.seed = seed;
  double sum = 0.0;
  for (double v : values) sum += v;
  w.mean = sum / values.size();
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - w.mean) * (v - w.mean);
    w.std_error = std::sqrt(ss / (values.size() - 1)) / std::sqrt(static_cast<double>(values.size()));
  }
  return w;
}

}  // namespace detail

/// Monte Carlo estimate of w(S) on C^d (x) C^d. Direction i and its restarts
/// come from stream (seed, i); results are reduced in index order.
inline WidthEstimate mean_width_separable(int d, int num_dirs, int restarts, std::uint64_t seed,
                                          unsigned workers = 0) {
  require(d >= 2, "mean width needs d >= 2");
  require(num_dirs >= 1, "need at least one direction");
  const auto values = parallel_map<double>(num_dirs, workers, [&](std::size_t i) {
    RngStream rng = make_stream(seed, i);
    const Direction u = sample_direction(d * d, rng);
    return support_separable(u, d, restarts, rng);
  });
  return detail::summarize(values, seed);
}

/// Same directions as mean_width_separable with the full state set: the
/// average largest eigenvalue.
inline WidthEstimate mean_width_state_set(int d, int num_dirs, std::uint64_t seed, unsigned workers = 0) {
  require(d >= 2, "mean width needs d >= 2");
  require(num_dirs >= 1, "need at least one direction");
  const auto values = parallel_map<double>(num_dirs, workers, [&](std::size_t i) {
    RngStream rng = make_stream(seed, i);
    return support_state_set(sample_direction(d * d, rng));
  });
  return detail::summarize(values, seed);
}

/// Monte Carlo estimate of w(S°) on C^2 (x) C^2: the spherical average of the
/// gauge of S, which is exact there because PPT decides separability.
inline WidthEstimate mean_width_polar_2x2(int num_dirs, double precision, std::uint64_t seed,
                                          unsigned workers = 0) {
  require(num_dirs >= 1, "need at least one direction");
  const auto values = parallel_map<double>(num_dirs, workers, [&](std::size_t i) {
    RngStream rng = make_stream(seed, i);
    return gauge_separable_2x2(sample_direction(4, rng).entries, precision);
  });
  return detail::summarize(values, seed);
}

struct ThresholdEstimate {
  double s0 = 0.0;
  double std_error = 0.0;
};

/// s0 = w(S°)^2 with first-order error propagation.
inline ThresholdEstimate threshold_s0_estimate(const WidthEstimate& width) {
  return {width.mean * width.mean, 2.0 * std::abs(width.mean) * width.std_error};
}

}  // namespace ptlab
