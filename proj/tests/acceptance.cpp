// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "ptlab/ptlab.hpp"

#include "oracles.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#ifndef PTLAB_CLI_PATH
#error "PTLAB_CLI_PATH must point at the ptlab executable"
#endif

namespace {

using namespace ptlab;

constexpr std::uint64_t kSeed = 20240521;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << " [" << name << "] " << detail << std::endl;
  if (!pass) ++failures;
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(6);
  o << v;
  return o.str();
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

struct SemicircleCheck {
  bool pass = false;
  std::string detail;
};

// KS vs SC(1, 1) and edges near (-1, 3) at alpha = 1.
SemicircleCheck check_alpha1(const SpectralReport& r) {
  const bool ks = r.ks <= 0.05;
  const bool lo = within(r.extremes_rescaled.lambda_min, -1.0, 0.1);
  const bool hi = within(r.extremes_rescaled.lambda_max, 3.0, 0.1);
  return {ks && lo && hi, "ks=" + fmt(r.ks) + " min=" + fmt(r.extremes_rescaled.lambda_min) +
                              " max=" + fmt(r.extremes_rescaled.lambda_max)};
}

// Edges near (0, 2) and median near 1/d^2 at alpha = 4.
SemicircleCheck check_alpha4(const SpectralReport& r) {
  const double target_median = 4e-4;
  const bool lo = within(r.extremes_rescaled.lambda_min, 0.0, 0.1);
  const bool hi = within(r.extremes_rescaled.lambda_max, 2.0, 0.1);
  const bool med = std::abs(r.median_eigenvalue - target_median) <= 0.05 * target_median;
  return {lo && hi && med, "min=" + fmt(r.extremes_rescaled.lambda_min) +
                               " max=" + fmt(r.extremes_rescaled.lambda_max) +
                               " median=" + fmt(r.median_eigenvalue)};
}

void criterion_semicircle_and_moments() {
  const SpectralReport a1 = semicircle_experiment(50, 2500, Ensemble::induced_wishart, kSeed, 0);
  const auto c1 = check_alpha1(a1);
  report(1, "semicircle alpha=1", c1.pass, c1.detail);

  const SpectralReport a4 = semicircle_experiment(50, 10000, Ensemble::induced_wishart, kSeed, 1);
  const auto c2 = check_alpha4(a4);
  report(2, "semicircle alpha=4", c2.pass, c2.detail);

  bool ok = true;
  std::string detail;
  const double expected[] = {1.0, 2.0, 5.0};
  for (std::size_t i = 0; i < a1.central_moments.size(); ++i) {
    const MomentRow& m = a1.central_moments[i];
    ok = ok && std::abs(m.empirical - expected[i]) <= 0.1 * expected[i];
    detail += "m" + std::to_string(m.k) + "=" + fmt(m.empirical) + " ";
  }
  ok = ok && a1.central_moments.size() == 3;
  report(3, "central moments alpha=1", ok, detail);
}

void criterion_ppt_threshold() {
  ScanConfig cfg;
  cfg.d = 10;
  cfg.trials = 100;
  cfg.seed = kSeed;
  for (int s = 300; s <= 500; s += 40) cfg.s_values.push_back(s);
  const auto records = ppt_scan(cfg);
  const ScanRecord& first = records.front();
  const ScanRecord& last = records.back();
  bool ok = first.p_ppt <= 0.05 && last.p_ppt >= 0.95;
  std::string detail = "p(300)=" + fmt(first.p_ppt) + " p(500)=" + fmt(last.p_ppt);
  try {
    const CrossingEstimate c = threshold_crossing(records);
    const double ratio = c.s_hat / 100.0;
    ok = ok && ratio >= 3.2 && ratio <= 4.8;
    detail += " s_hat/d^2=" + fmt(ratio) + " ci=[" + fmt(c.ci_low / 100.0) + "," + fmt(c.ci_high / 100.0) + "]";
  } catch (const NumericalFailure& e) {
    ok = false;
    detail += std::string(" crossing failed: ") + e.what();
  }
  report(4, "PPT threshold d=10", ok, detail);
}

void criterion_mixture() {
  const auto c1 = check_alpha1(semicircle_experiment(50, 2500, Ensemble::mixture, kSeed, 2));
  const auto c2 = check_alpha4(semicircle_experiment(50, 10000, Ensemble::mixture, kSeed, 3));
  report(5, "mixture ensemble", c1.pass && c2.pass, "alpha=1: " + c1.detail + " | alpha=4: " + c2.detail);
}

void criterion_sampler() {
  const SamplerValidationReport r4 = sampler_validation(4, 4, 2000, kSeed);
  bool ok = r4.routes_lambda_min.statistic < r4.routes_lambda_min.critical_1pct;
  std::string detail = "n=4 D=" + fmt(r4.routes_lambda_min.statistic) + " crit=" +
                       fmt(r4.routes_lambda_min.critical_1pct);
  for (int s : {2, 16}) {
    const SamplerValidationReport r2 = sampler_validation(2, s, 2000, kSeed + s);
    const double p = r2.density_lambda_min ? r2.density_lambda_min->p_value : 0.0;
    ok = ok && p > 0.01;
    detail += " n=2,s=" + std::to_string(s) + " p=" + fmt(p);
  }
  report(6, "sampler validation", ok, detail);
}

void criterion_marchenko_pastur() {
  const SpectralReport r = marchenko_pastur_baseline(50, 2500, kSeed, Ensemble::induced_wishart, 4);
  report(7, "Marchenko-Pastur baseline", r.ks <= 0.05, "ks=" + fmt(r.ks));
}

void criterion_geometry() {
  const ComplexMatrix bell_offset = oracle::bell_projector() - ComplexMatrix::Identity(4, 4) / 4.0;

  const double g = gauge_separable_2x2(bell_offset, 1e-10);
  const bool a = within(g, 3.0, 1e-6);

  const int dirs = 10000;
  const WidthEstimate ws = mean_width_separable(2, dirs, 16, kSeed);
  const WidthEstimate wp = mean_width_polar_2x2(dirs, 1e-8, kSeed);
  const double product = ws.mean * wp.mean;
  const double combined = std::hypot(ws.std_error * wp.mean, wp.std_error * ws.mean);
  const bool b = product >= 1.0 - 2.0 * combined;

  const Direction u = make_direction(bell_offset);
  RngStream rng = make_stream(kSeed, 0);
  const double h = support_separable(u, 2, 32, rng);
  const double grid = oracle::product_max_2x2(u.entries);
  const bool c = within(h, 1.0 / (2.0 * std::sqrt(3.0)), 1e-6) && within(h, grid, 1e-6);

  bool d = true;
  for (std::uint64_t i = 0; i < 20; ++i) {
    RngStream r = make_stream(kSeed, 1000 + i);
    const ComplexMatrix x = sample_direction(4, r).entries;
    const double base = gauge_separable_2x2(x, 1e-10);
    for (double scale : {0.25, 3.0, 17.0})
      d = d && within(gauge_separable_2x2(scale * x, 1e-10), scale * base, 1e-8 * (1.0 + scale));
  }

  report(8, "geometry", a && b && c && d,
         "gauge(bell)=" + fmt(g) + " w*w_polar=" + fmt(product) + " (2se=" + fmt(2 * combined) +
             ") h(bell)=" + fmt(h) + " grid=" + fmt(grid) + " homogeneity=" + (d ? "ok" : "broken"));
}

void criterion_operator_properties() {
  const int inputs = 500;
  int broken = 0;
  std::mt19937_64 gen(kSeed);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int t = 0; t < inputs; ++t) {
    const Split split{dim(gen), dim(gen)};
    const int n = split.dim();
    const ComplexMatrix m = oracle::random_hermitian(n, static_cast<unsigned>(t));
    const ComplexMatrix k = oracle::random_hermitian(n, static_cast<unsigned>(t + inputs));
    const ComplexMatrix a = oracle::random_hermitian(split.d1, static_cast<unsigned>(t + 2 * inputs));
    const ComplexMatrix b = oracle::random_hermitian(split.d2, static_cast<unsigned>(t + 3 * inputs));
    const double scale = std::max(1.0, m.norm());
    const double tol = 1e-12 * scale;

    const ComplexMatrix mg = partial_transpose(m, split);
    bool ok = (partial_transpose(mg, split) - m).norm() <= tol;
    ok = ok && std::abs(mg.trace() - m.trace()) <= tol;
    ok = ok && hermiticity_defect(mg) <= tol;
    ok = ok && (partial_transpose(ComplexMatrix(2.0 * m + k), split) - (2.0 * mg + partial_transpose(k, split)))
                       .norm() <= 1e-12 * (scale + k.norm());
    // (A (x) B)^G = A (x) B^T and (A (x) B)^{T_A} = A^T (x) B
    const ComplexMatrix ab = oracle::kron(a, b);
    ok = ok && (partial_transpose(ab, split) - oracle::kron(a, b.transpose())).norm() <= 1e-12 * (1 + ab.norm());
    ok = ok && (partial_transpose(ab, split, Factor::first) - oracle::kron(a.transpose(), b)).norm() <=
                   1e-12 * (1 + ab.norm());
    // transposing one factor then the other is the full transpose
    ok = ok && (partial_transpose(mg, split, Factor::first) - m.transpose()).norm() <= tol;
    // the partial trace is untouched by transposing the traced factor
    ok = ok && (partial_trace(mg, split, true) - partial_trace(m, split, true)).norm() <= tol;
    if (!ok) ++broken;
  }
  report(9, "partial transpose properties", broken == 0,
         std::to_string(inputs - broken) + "/" + std::to_string(inputs) + " inputs");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream o;
  o << in.rdbuf();
  return o.str();
}

void criterion_cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("ptlab_acceptance_" + std::to_string(kSeed));
  fs::create_directories(dir);
  const fs::path one = dir / "scan_w1.csv";
  const fs::path four = dir / "scan_w4.csv";
  auto run = [&](unsigned workers, const fs::path& out) {
    const std::string cmd = std::string("\"") + PTLAB_CLI_PATH + "\" ppt-scan --d 4 --s 16:96:16 --trials 50" +
                            " --seed " + std::to_string(kSeed) + " --workers " + std::to_string(workers) +
                            " --out \"" + out.string() + "\"";
    return std::system(cmd.c_str());
  };
  const int rc1 = run(1, one);
  const int rc4 = run(4, four);
  const std::string a = slurp(one);
  const std::string b = slurp(four);
  const bool ok = rc1 == 0 && rc4 == 0 && !a.empty() && a == b;
  report(10, "CLI determinism across workers", ok,
         "exit=" + std::to_string(rc1) + "," + std::to_string(rc4) + " bytes=" + std::to_string(a.size()) + "," +
             std::to_string(b.size()));
  fs::remove_all(dir);
}

void guarded(int id, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded(1, "semicircle and moments", criterion_semicircle_and_moments);
  guarded(4, "PPT threshold d=10", criterion_ppt_threshold);
  guarded(5, "mixture ensemble", criterion_mixture);
  guarded(6, "sampler validation", criterion_sampler);
  guarded(7, "Marchenko-Pastur baseline", criterion_marchenko_pastur);
  guarded(8, "geometry", criterion_geometry);
  guarded(9, "partial transpose properties", criterion_operator_properties);
  guarded(10, "CLI determinism across workers", criterion_cli_determinism);
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
