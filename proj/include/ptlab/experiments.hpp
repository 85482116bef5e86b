#pragma once

#include "ptlab/bipartite.hpp"
#include "ptlab/ensembles.hpp"
#include "ptlab/laws.hpp"
#include "ptlab/parallel.hpp"
#include "ptlab/rng.hpp"
#include "ptlab/spectra.hpp"
#include "ptlab/types.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ptlab {

// ---------------------------------------------------------------------------
// PPT scans and threshold location

struct ScanConfig {
  int d = 2;
  std::vector<int> s_values;
  int trials = 100;
  std::uint64_t seed = 0;
  Ensemble ensemble = Ensemble::induced_wishart;
  double tol = 1e-10;
  unsigned workers = 0;  // 0 = hardware concurrency; never affects results
};

inline void validate(const ScanConfig& cfg) {
  require(cfg.d >= 2, "d must be at least 2");
  require(!cfg.s_values.empty(), "s_values must be nonempty");
  require(cfg.s_values.front() >= 1, "s values must be positive");
  for (std::size_t i = 1; i < cfg.s_values.size(); ++i)
    require(cfg.s_values[i] > cfg.s_values[i - 1], "s_values must be strictly increasing");
  require(cfg.trials >= 1, "trials must be positive");
  require(cfg.tol >= 0.0, "tol must be nonnegative");
}

/// One scan point. For separability scans n_ppt counts separable samples.
struct ScanRecord {
  int d = 0;
  int s = 0;
  double alpha = 0.0;
  int trials = 0;
  int n_ppt = 0;
  double p_ppt = 0.0;
  double std_error = 0.0;
  double mean_lambda_min_rescaled = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

struct TrialOutcome {
  bool hit = false;
  double lambda_min = 0.0;
};

// Trial t of scan point p uses stream (seed, p * trials + t), so every sample
// in a scan is drawn from its own stream.
template <class Predicate>
std::vector<ScanRecord> run_scan(const ScanConfig& cfg, Predicate&& predicate) {
  validate(cfg);
  const int n = cfg.d * cfg.d;
  const Split split = balanced_split(cfg.d);
  const std::size_t points = cfg.s_values.size();
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);

  const auto outcomes = parallel_map<TrialOutcome>(points * trials, cfg.workers, [&](std::size_t k) {
    const std::size_t p = k / trials;
    const int s = cfg.s_values[p];
    try {
      RngStream rng = make_stream(cfg.seed, k);
      const DensityMatrix rho = sample_state(cfg.ensemble, n, s, split, rng);
      return predicate(rho);
    } catch (const NumericalFailure& e) {
      throw NumericalFailure(std::string(e.what()) + " (s = " + std::to_string(s) +
                             ", trial = " + std::to_string(k % trials) + ")");
    }
  });

  std::vector<ScanRecord> records;
  records.reserve(points);
  for (std::size_t p = 0; p < points; ++p) {
    ScanRecord r;
    r.d = cfg.d;
    r.s = cfg.s_values[p];
    r.alpha = static_cast<double>(r.s) / n;
    r.trials = cfg.trials;
    r.seed = cfg.seed;
    double lambda_sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const TrialOutcome& o = outcomes[p * trials + t];
      if (o.hit) ++r.n_ppt;
      lambda_sum += o.lambda_min;
    }
    r.p_ppt = static_cast<double>(r.n_ppt) / r.trials;
    r.std_error = std::sqrt(r.p_ppt * (1.0 - r.p_ppt) / r.trials);
    r.mean_lambda_min_rescaled = n * lambda_sum / r.trials;
    records.push_back(r);
  }
  return records;
}

}  // namespace detail

/// Monte Carlo estimate of P(rho is PPT) on C^d (x) C^d for each s.
inline std::vector<ScanRecord> ppt_scan(const ScanConfig& cfg) {
  return detail::run_scan(cfg, [tol = cfg.tol](const DensityMatrix& rho) {
    const PptResult r = is_ppt(rho, tol);
    return detail::TrialOutcome{r.ppt, r.lambda_min};
  });
}

struct CrossingEstimate {
  double s_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double intercept = 0.0;  // logistic coefficients in standardized s
  double slope = 0.0;
  double s_center = 0.0;
  double s_scale = 1.0;
  // False when the fitted slope is not positive, i.e. the scan does not show
  // P(PPT) increasing with s.
  bool monotone = true;
};

namespace detail {

struct LogisticFit {
  double intercept = 0.0;
  double slope = 0.0;
};

// Binomial logistic regression of k_i/n_i on z_i with a small ridge on the
// slope, which keeps perfectly separated data (a sharp step) finite. Damped
// Newton on the penalized log-likelihood.
inline LogisticFit fit_logistic(const std::vector<double>& z, const std::vector<int>& k,
                                const std::vector<int>& n, double ridge = 1e-3) {
  auto objective = [&](double b0, double b1) {
    double ll = -0.5 * ridge * b1 * b1;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double eta = b0 + b1 * z[i];
      // log(1 + e^eta), overflow-safe
      const double softplus = eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
      ll += k[i] * eta - n[i] * softplus;
    }
    return ll;
  };
  double b0 = 0.0;
  double b1 = 0.0;
  double current = objective(b0, b1);
  for (int iter = 0; iter < 200; ++iter) {
    double g0 = 0.0, g1 = -ridge * b1;
    double h00 = 0.0, h01 = 0.0, h11 = ridge;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double p = 1.0 / (1.0 + std::exp(-(b0 + b1 * z[i])));
      const double resid = k[i] - n[i] * p;
      const double w = n[i] * p * (1.0 - p);
      g0 += resid;
      g1 += resid * z[i];
      h00 += w;
      h01 += w * z[i];
      h11 += w * z[i] * z[i];
    }
    // Tiny diagonal shift keeps the system solvable when every p saturates.
    h00 += 1e-12;
    const double det = h00 * h11 - h01 * h01;
    if (!(det > 0.0)) break;
    const double step0 = (h11 * g0 - h01 * g1) / det;
    const double step1 = (h00 * g1 - h01 * g0) / det;
    double t = 1.0;
    bool accepted = false;
    for (int half = 0; half < 60; ++half, t *= 0.5) {
      const double cand = objective(b0 + t * step0, b1 + t * step1);
      if (cand >= current) {
        b0 += t * step0;
        b1 += t * step1;
        current = cand;
        accepted = true;
        break;
      }
    }
    if (!accepted || std::abs(t * step0) + std::abs(t * step1) < 1e-12) break;
  }
  return {b0, b1};
}

}  // namespace detail

/// Locates the s where the fitted P(PPT) crosses 1/2, with a percentile
/// bootstrap interval from parametric resampling of each point's binomial
/// count.
inline CrossingEstimate threshold_crossing(const std::vector<ScanRecord>& records, int resamples = 1000,
                                           std::optional<std::uint64_t> bootstrap_seed = std::nullopt) {
  require(!records.empty(), "threshold_crossing needs records");
  const bool below = std::any_of(records.begin(), records.end(), [](const ScanRecord& r) { return r.p_ppt <= 0.5; });
  const bool above = std::any_of(records.begin(), records.end(), [](const ScanRecord& r) { return r.p_ppt >= 0.5; });
  if (!below || !above) throw NumericalFailure("threshold crossing not bracketed by the scan");

  CrossingEstimate est;
  if (records.size() == 1) {
    // Only reachable with p exactly 1/2.
    est.s_hat = est.ci_low = est.ci_high = est.s_center = records.front().s;
    return est;
  }

  std::vector<double> s(records.size());
  std::vector<int> k(records.size()), n(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    s[i] = records[i].s;
    k[i] = records[i].n_ppt;
    n[i] = records[i].trials;
  }
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= s.size();
  double var = 0.0;
  for (double v : s) var += (v - mean) * (v - mean);
  const double scale = std::sqrt(var / s.size());
  require(scale > 0.0, "threshold_crossing needs at least two distinct s values");
  std::vector<double> z(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) z[i] = (s[i] - mean) / scale;

  auto crossing_of = [&](const detail::LogisticFit& f) { return mean - scale * f.intercept / f.slope; };

  const detail::LogisticFit fit = detail::fit_logistic(z, k, n);
  est.intercept = fit.intercept;
  est.slope = fit.slope;
  est.s_center = mean;
  est.s_scale = scale;
  est.monotone = fit.slope > 0.0;
  if (!(fit.slope != 0.0)) throw NumericalFailure("logistic fit has zero slope; no crossing");
  est.s_hat = crossing_of(fit);

  const std::uint64_t seed = bootstrap_seed.value_or(records.front().seed);
  std::vector<double> boot;
  boot.reserve(resamples);
  for (int b = 0; b < resamples; ++b) {
    RngStream rng = make_stream(seed, (std::uint64_t{1} << 62) + static_cast<std::uint64_t>(b));
    std::vector<int> kb(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
      std::binomial_distribution<int> draw(n[i], static_cast<double>(k[i]) / n[i]);
      kb[i] = draw(rng);
    }
    const detail::LogisticFit fb = detail::fit_logistic(z, kb, n);
    if (fb.slope > 0.0) boot.push_back(crossing_of(fb));
  }
  if (boot.empty()) {
    est.ci_low = est.ci_high = est.s_hat;
  } else {
    std::sort(boot.begin(), boot.end());
    auto quantile = [&boot](double q) {
      const double pos = q * (boot.size() - 1);
      const auto lo = static_cast<std::size_t>(std::floor(pos));
      const auto hi = std::min(lo + 1, boot.size() - 1);
      return boot[lo] + (pos - lo) * (boot[hi] - boot[lo]);
    };
    est.ci_low = quantile(0.025);
    est.ci_high = quantile(0.975);
  }
  return est;
}

// ---------------------------------------------------------------------------
// Spectral experiments

struct MomentRow {
  int k = 0;
  double empirical = 0.0;
  double predicted = 0.0;
};

struct SpectralReport {
  int d = 0;
  int s = 0;
  double alpha = 0.0;
  Ensemble ensemble = Ensemble::induced_wishart;
  bool partial_transpose = true;
  std::uint64_t seed = 0;
  SpectralLaw law;
  double ks = 0.0;
  Extremes extremes_rescaled;
  Extremes predicted_extremes;
  std::vector<MomentRow> central_moments;
  double mean_rescaled = 0.0;
  double median_eigenvalue = 0.0;  // unrescaled
  Histogram histogram;             // of the rescaled spectrum
  Spectrum spectrum;               // unrescaled eigenvalues
};

namespace detail {

inline SpectralReport spectral_report(int d, int s, Ensemble ensemble, std::uint64_t seed,
                                      std::uint64_t stream_index, bool transpose, const SpectralLaw& law) {
  const int n = d * d;
  RngStream rng = make_stream(seed, stream_index);
  const DensityMatrix rho = sample_state(ensemble, n, s, balanced_split(d), rng);

  SpectralReport rep;
  rep.d = d;
  rep.s = s;
  rep.alpha = static_cast<double>(s) / n;
  rep.ensemble = ensemble;
  rep.partial_transpose = transpose;
  rep.seed = seed;
  rep.law = law;
  rep.spectrum = hermitian_eigenvalues(transpose ? partial_transpose(rho) : rho.entries);

  const Spectrum scaled = rescale(rep.spectrum, static_cast<double>(n));
  rep.ks = ks_distance(scaled, law);
  rep.extremes_rescaled = extremes(scaled);
  const auto [lo, hi] = law.support();
  rep.predicted_extremes = {lo, hi};
  for (int k : {2, 4, 6})
    rep.central_moments.push_back({k, central_moment(scaled, law.mean(), k), law_central_moment(law, k)});
  rep.mean_rescaled = spectrum_mean(scaled);
  rep.median_eigenvalue = median(rep.spectrum);
  rep.histogram = make_law_histogram(scaled, law);
  return rep;
}

}  // namespace detail

/// One draw of rho on C^d (x) C^d; the spectrum of d^2 rho^G is compared with
/// SC(1, 1/alpha), alpha = s/d^2.
inline SpectralReport semicircle_experiment(int d, int s, Ensemble ensemble, std::uint64_t seed,
                                            std::uint64_t stream_index = 0) {
  require(d >= 2, "d must be at least 2");
  require(s >= 1, "s must be positive");
  const double alpha = static_cast<double>(s) / (d * d);
  return detail::spectral_report(d, s, ensemble, seed, stream_index, true,
                                 SpectralLaw::semicircle(1.0, 1.0 / alpha));
}

/// Same pipeline without the partial transpose, against MP(alpha).
inline SpectralReport marchenko_pastur_baseline(int d, int s, std::uint64_t seed,
                                                Ensemble ensemble = Ensemble::induced_wishart,
                                                std::uint64_t stream_index = 0) {
  require(d >= 2, "d must be at least 2");
  require(s >= d * d, "Marchenko-Pastur baseline needs alpha = s/d^2 >= 1");
  const double alpha = static_cast<double>(s) / (d * d);
  return detail::spectral_report(d, s, ensemble, seed, stream_index, false,
                                 SpectralLaw::marchenko_pastur(alpha));
}

struct Figure1Panel {
  SpectralReport report;
  Histogram histogram;  // unrescaled eigenvalues of rho^G
};

struct Figure1Result {
  Figure1Panel alpha1;
  Figure1Panel alpha4;
};

/// One sample per panel on C^50 (x) C^50 with s = 2500 and s = 10000.
inline Figure1Result figure1_reproduction(std::uint64_t seed, Ensemble ensemble = Ensemble::induced_wishart) {
  constexpr int kD = 50;
  constexpr int kN = kD * kD;
  auto panel = [&](int s, std::uint64_t stream) {
    Figure1Panel p;
    p.report = semicircle_experiment(kD, s, ensemble, seed, stream);
    const double half = 2.5 * std::sqrt(p.report.law.variance());
    p.histogram = make_histogram(p.report.spectrum, 60, (1.0 - half) / kN, (1.0 + half) / kN);
    return p;
  };
  return {panel(kN, 0), panel(4 * kN, 1)};
}

// ---------------------------------------------------------------------------
// Sampler validation

struct SamplerValidationReport {
  int n = 0;
  int s = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  KsTest routes_lambda_min;
  KsTest routes_lambda_max;
  double mean_lambda_min_wishart = 0.0;
  double mean_lambda_min_trace = 0.0;
  // Only for n = 2: Wishart-route lambda_min against the induced eigenvalue density.
  std::optional<KsTest> density_lambda_min;
  std::optional<double> density_mean_lambda_min;
};

/// Density of the smaller eigenvalue of a 2x2 induced state,
/// proportional to [lambda (1 - lambda)]^{s-2} (1 - 2 lambda)^2 on [0, 1/2]:
/// the (det rho)^{s-n} weight times the squared Vandermonde volume factor.
/// Normalized by Gauss-Legendre quadrature.
class QubitLambdaMinDensity {
public:
  explicit QubitLambdaMinDensity(int s) : s_(s) {
    require(s >= 2, "the qubit density needs s >= 2");
    norm_ = integrate(0.0, 0.5, [this](double x) { return unnormalized(x); });
    if (!(norm_ > 0.0) || !std::isfinite(norm_)) throw NumericalFailure("density normalization failed");
  }

  double unnormalized(double x) const {
    if (x < 0.0 || x > 0.5) return 0.0;
    return std::pow(x * (1.0 - x), s_ - 2) * (1.0 - 2.0 * x) * (1.0 - 2.0 * x);
  }
  double pdf(double x) const { return unnormalized(x) / norm_; }

  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 0.5) return 1.0;
    return std::clamp(integrate(0.0, x, [this](double t) { return unnormalized(t); }) / norm_, 0.0, 1.0);
  }

  double mean() const {
    return integrate(0.0, 0.5, [this](double t) { return t * unnormalized(t); }) / norm_;
  }

private:
  template <class F>
  static double integrate(double a, double b, F&& f) {
    // The integrand is a polynomial of degree 2s - 2; split [a, b] so that 30
    // nodes per piece stay exact well beyond the s values used here.
    constexpr int kPieces = 8;
    double total = 0.0;
    const double h = (b - a) / kPieces;
    for (int i = 0; i < kPieces; ++i)
      total += boost::math::quadrature::gauss<double, 30>::integrate(f, a + i * h, a + (i + 1) * h);
    return total;
  }

  int s_;
  double norm_ = 1.0;
};

/// Cross-validates the Wishart and partial-trace samplers on the extreme
/// eigenvalue marginals and, for n = 2, checks lambda_min against the
/// induced eigenvalue density.
inline SamplerValidationReport sampler_validation(int n, int s, int samples, std::uint64_t seed,
                                                  unsigned workers = 0) {
  require(n == 2 || n == 4 || n == 6, "sampler validation supports n in {2, 4, 6}");
  require(s >= n, "sampler validation needs s >= n");
  require(samples >= 10, "sampler validation needs at least 10 samples");
  const Split split{n / 2 == 1 ? 1 : 2, n / 2 == 1 ? 2 : n / 2};

  struct Ext {
    double lo = 0.0;
    double hi = 0.0;
  };
  const auto count = static_cast<std::size_t>(samples);
  const auto draws = parallel_map<Ext>(2 * count, workers, [&](std::size_t i) {
    RngStream rng = make_stream(seed, i);
    const DensityMatrix rho = i < count ? sample_induced_state_wishart(n, s, split, rng)
                                        : sample_induced_state_trace(n, s, split, rng);
    const Spectrum spec = hermitian_eigenvalues(rho.entries);
    return Ext{spec.values.front(), spec.values.back()};
  });

  std::vector<double> min_w, min_t, max_w, max_t;
  for (std::size_t i = 0; i < count; ++i) {
    min_w.push_back(draws[i].lo);
    max_w.push_back(draws[i].hi);
    min_t.push_back(draws[count + i].lo);
    max_t.push_back(draws[count + i].hi);
  }

  SamplerValidationReport rep;
  rep.n = n;
  rep.s = s;
  rep.samples = samples;
  rep.seed = seed;
  rep.routes_lambda_min = ks_two_sample(min_w, min_t);
  rep.routes_lambda_max = ks_two_sample(max_w, max_t);
  for (double v : min_w) rep.mean_lambda_min_wishart += v / samples;
  for (double v : min_t) rep.mean_lambda_min_trace += v / samples;
  if (n == 2) {
    const QubitLambdaMinDensity density(s);
    rep.density_lambda_min = ks_one_sample(min_w, [&density](double x) { return density.cdf(x); });
    rep.density_mean_lambda_min = density.mean();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Entanglement classification and the exact 2x2 separability scan

enum class EntanglementFlag {
  separable,
  entangled_npt,
  ppt_unknown,
  // Reserved: a PPT entangled state certified in 2x2 or 2x3. Cannot occur,
  // since PPT is exact there; kept so the classification is exhaustive.
  ppt_entangled_small,
};

inline std::string_view to_string(EntanglementFlag f) {
  switch (f) {
    case EntanglementFlag::separable: return "separable";
    case EntanglementFlag::entangled_npt: return "entangled_npt";
    case EntanglementFlag::ppt_unknown: return "ppt_unknown";
    case EntanglementFlag::ppt_entangled_small: return "ppt_entangled_small";
  }
  return "unknown";
}

/// NPT states are entangled; PPT states are separable in 2x2 and 2x3 and
/// undecided (possibly bound entangled) everywhere else.
inline EntanglementFlag bound_entangled_flag(const DensityMatrix& rho, double tol = 1e-10) {
  if (!is_ppt(rho, tol).ppt) return EntanglementFlag::entangled_npt;
  const Split s = rho.split;
  const bool small = (s == Split{2, 2}) || (s == Split{2, 3}) || (s == Split{3, 2});
  return small ? EntanglementFlag::separable : EntanglementFlag::ppt_unknown;
}

struct SeparabilityScan {
  std::vector<ScanRecord> records;  // n_ppt / p_ppt count separable samples
  std::optional<CrossingEstimate> crossing;
};

/// P(separable) on C^2 (x) C^2 by the exact PPT criterion, with the logistic
/// crossing when the scan brackets 1/2.
inline SeparabilityScan separability_scan_2x2(const std::vector<int>& s_values, int trials,
                                              std::uint64_t seed, unsigned workers = 0,
                                              Ensemble ensemble = Ensemble::induced_wishart) {
  ScanConfig cfg;
  cfg.d = 2;
  cfg.s_values = s_values;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.ensemble = ensemble;
  cfg.workers = workers;
  SeparabilityScan out;
  out.records = detail::run_scan(cfg, [tol = cfg.tol](const DensityMatrix& rho) {
    const PptResult r = is_ppt(rho, tol);
    return detail::TrialOutcome{is_separable_small(rho, tol), r.lambda_min};
  });
  try {
    out.crossing = threshold_crossing(out.records);
  } catch (const NumericalFailure&) {
    out.crossing.reset();
  }
  return out;
}

}  // namespace ptlab
