#pragma once

#include "ptlab/types.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>

namespace ptlab {

/// Reference limit law for an empirical spectral distribution.
///
/// SemiCircle(a, sigma2) lives on [a - 2 sigma, a + 2 sigma]. MarchenkoPastur(alpha)
/// is parametrized to have mean 1 and variance 1/alpha, the scaling of the
/// spectrum of n * rho for an induced state with s = alpha * n; its support is
/// [(1 - 1/sqrt(alpha))^2, (1 + 1/sqrt(alpha))^2] and only alpha >= 1 is
/// supported (no atom at zero).
struct SpectralLaw {
  enum class Kind { semicircle, marchenko_pastur };

  Kind kind = Kind::semicircle;
  double a = 0.0;
  double sigma2 = 1.0;
  double alpha = 1.0;

  static SpectralLaw semicircle(double center, double variance) {
    require(variance > 0.0, "semicircle variance must be positive");
    return {Kind::semicircle, center, variance, 0.0};
  }

  static SpectralLaw marchenko_pastur(double ratio) {
    require(ratio >= 1.0, "Marchenko-Pastur law is only supported for alpha >= 1");
    return {Kind::marchenko_pastur, 0.0, 0.0, ratio};
  }

  double sigma() const { return std::sqrt(sigma2); }

  std::pair<double, double> support() const {
    if (kind == Kind::semicircle) return {a - 2.0 * sigma(), a + 2.0 * sigma()};
    const double r = 1.0 / std::sqrt(alpha);
    return {(1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r)};
  }

  double mean() const { return kind == Kind::semicircle ? a : 1.0; }
  double variance() const { return kind == Kind::semicircle ? sigma2 : 1.0 / alpha; }

  std::string describe() const {
    if (kind == Kind::semicircle)
      return "SC(" + std::to_string(a) + "," + std::to_string(sigma2) + ")";
    return "MP(" + std::to_string(alpha) + "), mean 1, variance 1/alpha";
  }
};

inline double sc_density(const SpectralLaw& law, double x) {
  require(law.kind == SpectralLaw::Kind::semicircle, "sc_density needs a semicircle law");
  const double r2 = 4.0 * law.sigma2 - (x - law.a) * (x - law.a);
  if (r2 <= 0.0) return 0.0;
  return std::sqrt(r2) / (2.0 * std::numbers::pi * law.sigma2);
}

inline double sc_cdf(const SpectralLaw& law, double x) {
  require(law.kind == SpectralLaw::Kind::semicircle, "sc_cdf needs a semicircle law");
  const double u = (x - law.a) / (2.0 * law.sigma());
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double value = 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / std::numbers::pi;
  return std::clamp(value, 0.0, 1.0);
}

/// C_k = binomial(2k, k) / (k + 1), exact for k <= 30.
inline std::uint64_t catalan(int k) {
  require(k >= 0, "Catalan index must be nonnegative");
  require(k <= 30, "Catalan index above 30 overflows");
  // C_{j+1} = C_j * 2(2j+1) / (j+2); the product fits in 64 bits for j < 30.
  std::uint64_t c = 1;
  for (int j = 0; j < k; ++j)
    c = c * static_cast<std::uint64_t>(2 * (2 * j + 1)) / static_cast<std::uint64_t>(j + 2);
  return c;
}

/// k-th central moment of a semicircle: C_{k/2} sigma^k for even k, else 0.
inline double sc_central_moment(const SpectralLaw& law, int k) {
  require(law.kind == SpectralLaw::Kind::semicircle, "sc_central_moment needs a semicircle law");
  require(k >= 0, "moment order must be nonnegative");
  if (k % 2 != 0) return 0.0;
  return static_cast<double>(catalan(k / 2)) * std::pow(law.sigma2, k / 2);
}

inline double mp_density(const SpectralLaw& law, double x) {
  require(law.kind == SpectralLaw::Kind::marchenko_pastur, "mp_density needs a Marchenko-Pastur law");
  const auto [lo, hi] = law.support();
  if (x <= lo || x >= hi || x <= 0.0) return 0.0;
  return law.alpha / (2.0 * std::numbers::pi * x) * std::sqrt((hi - x) * (x - lo));
}

/// Raw moment E[X^k] of MP with mean 1 and variance c = 1/alpha:
/// sum_{j=1}^{k} N(k, j) c^{j-1}, with Narayana numbers N(k, j).
inline double mp_raw_moment(const SpectralLaw& law, int k) {
  require(law.kind == SpectralLaw::Kind::marchenko_pastur, "mp_raw_moment needs a Marchenko-Pastur law");
  require(k >= 0 && k <= 30, "moment order must be in [0, 30]");
  if (k == 0) return 1.0;
  const double c = 1.0 / law.alpha;
  auto binom = [](int n, int r) {
    double b = 1.0;
    for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
  };
  double m = 0.0;
  for (int j = 1; j <= k; ++j) {
    const double narayana = binom(k, j) * binom(k, j - 1) / k;
    m += narayana * std::pow(c, j - 1);
  }
  return m;
}

inline double mp_central_moment(const SpectralLaw& law, int k) {
  require(k >= 0, "moment order must be nonnegative");
  // E[(X - 1)^k] = sum_j binom(k, j) E[X^j] (-1)^{k-j}
  double m = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    m += binom * mp_raw_moment(law, j) * sign;
    binom = binom * (k - j) / (j + 1);
  }
  return m;
}

/// Integral of the MP density from the lower support edge to x, by tanh-sinh
/// quadrature (which tolerates the square-root and 1/sqrt edge behaviour).
inline double mp_cdf(const SpectralLaw& law, double x) {
  require(law.kind == SpectralLaw::Kind::marchenko_pastur, "mp_cdf needs a Marchenko-Pastur law");
  const auto [lo, hi] = law.support();
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&law](double t) { return mp_density(law, t); };
  double error = 0.0;
  double value = 0.0;
  // Integrate from whichever edge is closer for better relative accuracy.
  if (x - lo <= hi - x) {
    value = integrator.integrate(f, lo, x, 1e-13, &error);
  } else {
    value = 1.0 - integrator.integrate(f, x, hi, 1e-13, &error);
  }
  if (!std::isfinite(value) || error > 1e-9)
    throw NumericalFailure("Marchenko-Pastur CDF quadrature did not converge at x = " +
                           std::to_string(x));
  return std::clamp(value, 0.0, 1.0);
}

inline double law_density(const SpectralLaw& law, double x) {
  return law.kind == SpectralLaw::Kind::semicircle ? sc_density(law, x) : mp_density(law, x);
}

inline double law_cdf(const SpectralLaw& law, double x) {
  return law.kind == SpectralLaw::Kind::semicircle ? sc_cdf(law, x) : mp_cdf(law, x);
}

inline double law_central_moment(const SpectralLaw& law, int k) {
  return law.kind == SpectralLaw::Kind::semicircle ? sc_central_moment(law, k)
                                                   : mp_central_moment(law, k);
}

}  // namespace ptlab
