#pragma once

#include "ptlab/laws.hpp"
#include "ptlab/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace ptlab {

/// Eigenvalues of a Hermitian matrix in ascending order.
struct Spectrum {
  std::vector<double> values;

  int dim() const noexcept { return static_cast<int>(values.size()); }
};

struct Histogram {
  std::vector<double> bin_edges;
  std::vector<std::int64_t> counts;
  std::vector<double> normalized_density;
  std::int64_t below = 0;
  std::int64_t above = 0;
  std::int64_t total = 0;

  int bins() const noexcept { return static_cast<int>(counts.size()); }
};

/// All eigenvalues of a dense Hermitian matrix (Householder tridiagonalization
/// followed by implicit QR). Only the lower triangle is read, so the
/// Hermiticity check is what protects against passing a non-Hermitian matrix.
inline Spectrum hermitian_eigenvalues(const ComplexMatrix& m, double hermitian_tol = 1e-12) {
  require(m.rows() == m.cols() && m.rows() >= 1, "eigenvalues need a nonempty square matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermiticity_defect(m) > hermitian_tol * scale)
    throw InvalidArgument("matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("Hermitian eigensolver did not converge");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  Spectrum spec{std::vector<double>(ev.data(), ev.data() + ev.size())};
  std::sort(spec.values.begin(), spec.values.end());
  return spec;
}

inline Spectrum rescale(const Spectrum& spec, double factor) {
  require(factor > 0.0, "rescale factor must be positive");
  Spectrum out = spec;
  for (double& v : out.values) v *= factor;
  return out;
}

/// Fraction of eigenvalues in the closed interval [a, b].
inline double interval_fraction(const Spectrum& spec, double a, double b) {
  require(a <= b, "interval must satisfy a <= b");
  if (spec.values.empty()) return 0.0;
  const auto first = std::lower_bound(spec.values.begin(), spec.values.end(), a);
  const auto last = std::upper_bound(spec.values.begin(), spec.values.end(), b);
  return static_cast<double>(std::distance(first, last)) / spec.dim();
}

inline double spectrum_mean(const Spectrum& spec) {
  require(spec.dim() >= 1, "empty spectrum");
  double sum = 0.0;
  for (double v : spec.values) sum += v;
  return sum / spec.dim();
}

/// (1/dim) sum_i (lambda_i - center)^k
inline double central_moment(const Spectrum& spec, double center, int k) {
  require(k >= 1, "moment order must be positive");
  require(spec.dim() >= 1, "empty spectrum");
  double sum = 0.0;
  for (double v : spec.values) sum += std::pow(v - center, k);
  return sum / spec.dim();
}

inline double median(const Spectrum& spec) {
  require(spec.dim() >= 1, "empty spectrum");
  const auto n = spec.values.size();
  if (n % 2 == 1) return spec.values[n / 2];
  return 0.5 * (spec.values[n / 2 - 1] + spec.values[n / 2]);
}

struct Extremes {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

inline Extremes extremes(const Spectrum& spec) {
  require(spec.dim() >= 1, "empty spectrum");
  return {spec.values.front(), spec.values.back()};
}

/// Kolmogorov-Smirnov statistic of sorted samples against a continuous CDF.
template <class Cdf>
double ks_statistic_sorted(const std::vector<double>& sorted, Cdf&& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// sup |ESD - law CDF|, evaluated at the jump points of the ESD.
inline double ks_distance(const Spectrum& spec, const SpectralLaw& law) {
  require(spec.dim() >= 1, "empty spectrum");
  std::vector<double> sorted = spec.values;
  std::sort(sorted.begin(), sorted.end());
  return ks_statistic_sorted(sorted, [&law](double x) { return law_cdf(law, x); });
}

/// Equal-width bins over [lo, hi]. Values outside the range are tallied in
/// `below`/`above`; a value equal to hi lands in the last bin. The density is
/// count / (total * width), so it integrates to the in-range fraction.
inline Histogram make_histogram(const Spectrum& spec, int bins, double lo, double hi) {
  require(bins >= 1, "histogram needs at least one bin");
  require(lo < hi, "histogram range must be nonempty");
  Histogram h;
  h.total = spec.dim();
  h.bin_edges.resize(bins + 1);
  const double width = (hi - lo) / bins;
  for (int i = 0; i <= bins; ++i) h.bin_edges[i] = lo + width * i;
  h.bin_edges[bins] = hi;
  h.counts.assign(bins, 0);
  for (double v : spec.values) {
    if (v < lo) {
      ++h.below;
    } else if (v > hi) {
      ++h.above;
    } else {
      const int idx = std::min(bins - 1, static_cast<int>((v - lo) / width));
      ++h.counts[idx];
    }
  }
  h.normalized_density.resize(bins);
  for (int i = 0; i < bins; ++i) {
    const double w = h.bin_edges[i + 1] - h.bin_edges[i];
    h.normalized_density[i] =
        h.total > 0 ? static_cast<double>(h.counts[i]) / (static_cast<double>(h.total) * w) : 0.0;
  }
  return h;
}

/// Default rendering window for a law: 60 bins over mean +- 2.5 standard deviations.
inline Histogram make_law_histogram(const Spectrum& spec, const SpectralLaw& law, int bins = 60) {
  const double half = 2.5 * std::sqrt(law.variance());
  return make_histogram(spec, bins, law.mean() - half, law.mean() + half);
}

// Goodness-of-fit helpers for sample (not spectrum) comparisons.

/// Survival function of the Kolmogorov distribution,
/// Q(t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
inline double kolmogorov_survival(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 0.2) return 1.0;  // series converges slowly here and Q(t) = 1 to double precision
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsTest {
  double statistic = 0.0;
  double p_value = 1.0;
  double critical_1pct = 0.0;
};

/// One-sample KS test with the Stephens finite-n correction of the asymptotic
/// p-value.
template <class Cdf>
KsTest ks_one_sample(std::vector<double> samples, Cdf&& cdf) {
  require(!samples.empty(), "KS test needs samples");
  std::sort(samples.begin(), samples.end());
  KsTest t;
  t.statistic = ks_statistic_sorted(samples, cdf);
  const double sn = std::sqrt(static_cast<double>(samples.size()));
  t.p_value = kolmogorov_survival((sn + 0.12 + 0.11 / sn) * t.statistic);
  t.critical_1pct = 1.628 / sn;
  return t;
}

/// Two-sample KS test. critical_1pct is c(0.01) sqrt((n + m) / (n m)) with
/// c(0.01) = 1.628.
inline KsTest ks_two_sample(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), "KS test needs samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsTest t;
  t.statistic = d;
  const double ne = std::sqrt(na * nb / (na + nb));
  t.p_value = kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d);
  t.critical_1pct = 1.628 / ne;
  return t;
}

}  // namespace ptlab
