// ptlab: command-line driver for the random-state experiments.
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.

#include "ptlab/ptlab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ptlab::InvalidArgument;
using json = nlohmann::ordered_json;

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

/// "a,b,c" or an inclusive range "a:b:step".
std::vector<int> parse_s_list(const std::string& text) {
  std::vector<int> out;
  auto to_int = [&text](const std::string& tok) {
    try {
      std::size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size() || v < 1 || v > (1L << 30)) throw std::out_of_range(tok);
      return static_cast<int>(v);
    } catch (const std::exception&) {
      throw InvalidArgument("bad s list '" + text + "'");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
    if (parts.size() != 3) throw InvalidArgument("range must be a:b:step, got '" + text + "'");
    const int a = to_int(parts[0]);
    const int b = to_int(parts[1]);
    const int step = to_int(parts[2]);
    if (b < a) throw InvalidArgument("range end below start in '" + text + "'");
    for (int v = a; v <= b; v += step) out.push_back(v);
  } else {
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) out.push_back(to_int(tok));
  }
  if (out.empty()) throw InvalidArgument("empty s list");
  return out;
}

std::ofstream open_output(const std::string& path, bool binary = false) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  return out;
}

void write_json(const std::string& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Options {
  int n = 4, s = 4, d = 2, d1 = 0, d2 = 0, trials = 100, dirs = 1000, restarts = 32, samples = 2000;
  std::uint64_t seed = 0;
  std::string ensemble = "wishart";
  std::string s_list;
  std::string out, outdir, hist_csv, crossing_out;
  double tol = 1e-10;
  double precision = 1e-8;
  unsigned workers = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ptlab: random induced states, partial transposes and PPT phase transitions"};
  app.require_subcommand(1);
  Options o;

  auto* sample = app.add_subcommand("sample", "Draw one random state and write it to a matrix file");
  sample->add_option("--n", o.n, "Total dimension")->required();
  sample->add_option("--s", o.s, "Ancilla dimension / number of mixed pure states")->required();
  sample->add_option("--d1", o.d1, "First factor dimension")->required();
  sample->add_option("--d2", o.d2, "Second factor dimension")->required();
  sample->add_option("--ensemble", o.ensemble, "wishart | trace | mixture")->required();
  sample->add_option("--seed", o.seed, "RNG seed")->required();
  sample->add_option("--out", o.out, "Output path (.json for JSON, anything else binary)")->required();

  auto* scan = app.add_subcommand("ppt-scan", "Monte Carlo P(PPT) over a list of s values");
  scan->add_option("--d", o.d, "Local dimension")->required();
  scan->add_option("--s", o.s_list, "s list 'a,b,c' or range 'a:b:step'")->required();
  scan->add_option("--trials", o.trials, "Samples per s")->required();
  scan->add_option("--seed", o.seed, "RNG seed")->required();
  scan->add_option("--out", o.out, "CSV output path")->required();
  scan->add_option("--ensemble", o.ensemble, "wishart | trace | mixture");
  scan->add_option("--tol", o.tol, "PPT tolerance on lambda_min");
  scan->add_option("--workers", o.workers, "Worker threads (0 = all cores); output does not depend on it");
  scan->add_option("--crossing-out", o.crossing_out, "Optional JSON with the fitted threshold crossing");

  auto* semi = app.add_subcommand("semicircle", "Spectrum of d^2 rho^Gamma versus the semicircle law");
  semi->add_option("--d", o.d, "Local dimension")->required();
  semi->add_option("--s", o.s, "Ancilla dimension")->required();
  semi->add_option("--ensemble", o.ensemble, "wishart | trace | mixture")->required();
  semi->add_option("--seed", o.seed, "RNG seed")->required();
  semi->add_option("--out", o.out, "JSON report path")->required();
  semi->add_option("--hist-csv", o.hist_csv, "Optional histogram CSV of the rescaled spectrum");

  auto* mp = app.add_subcommand("mp-baseline", "Spectrum of d^2 rho versus Marchenko-Pastur");
  mp->add_option("--d", o.d, "Local dimension")->required();
  mp->add_option("--s", o.s, "Ancilla dimension (s >= d^2)")->required();
  mp->add_option("--seed", o.seed, "RNG seed")->required();
  mp->add_option("--out", o.out, "JSON report path")->required();
  mp->add_option("--hist-csv", o.hist_csv, "Optional histogram CSV of the rescaled spectrum");

  auto* fig = app.add_subcommand("figure1", "Eigenvalue histograms of rho^Gamma on C^50 (x) C^50, alpha = 1 and 4");
  fig->add_option("--seed", o.seed, "RNG seed")->required();
  fig->add_option("--outdir", o.outdir, "Output directory")->required();
  fig->add_option("--ensemble", o.ensemble, "wishart | trace | mixture");

  auto* width = app.add_subcommand("mean-width", "Monte Carlo mean widths of S and its polar at d = 2");
  width->add_option("--d", o.d, "Local dimension (only 2)")->required();
  width->add_option("--dirs", o.dirs, "Number of random directions")->required();
  width->add_option("--restarts", o.restarts, "Alternating-maximization restarts per direction")->required();
  width->add_option("--precision", o.precision, "Gauge bisection precision")->required();
  width->add_option("--seed", o.seed, "RNG seed")->required();
  width->add_option("--out", o.out, "JSON report path")->required();
  width->add_option("--workers", o.workers, "Worker threads (0 = all cores)");

  auto* validate = app.add_subcommand("validate-sampler", "Cross-validate the Wishart and partial-trace samplers");
  validate->add_option("--n", o.n, "Dimension (2, 4 or 6)")->required();
  validate->add_option("--s", o.s, "Ancilla dimension (s >= n)")->required();
  validate->add_option("--samples", o.samples, "Samples per route")->required();
  validate->add_option("--seed", o.seed, "RNG seed")->required();
  validate->add_option("--out", o.out, "JSON report path")->required();
  validate->add_option("--workers", o.workers, "Worker threads (0 = all cores)");

  auto* sep = app.add_subcommand("separability-scan", "Exact P(separable) on C^2 (x) C^2 over a list of s values");
  sep->add_option("--s", o.s_list, "s list 'a,b,c' or range 'a:b:step'")->required();
  sep->add_option("--trials", o.trials, "Samples per s")->required();
  sep->add_option("--seed", o.seed, "RNG seed")->required();
  sep->add_option("--out", o.out, "CSV output path")->required();
  sep->add_option("--crossing-out", o.crossing_out, "Optional JSON with the fitted crossing");
  sep->add_option("--workers", o.workers, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (sample->parsed()) {
      const ptlab::Ensemble ens = ptlab::parse_ensemble(o.ensemble);
      ptlab::RngStream rng = ptlab::make_stream(o.seed, 0);
      const ptlab::DensityMatrix rho = ptlab::sample_state(ens, o.n, o.s, ptlab::Split{o.d1, o.d2}, rng);
      if (ends_with(o.out, ".json")) {
        json j;
        j["artifact_version"] = ptlab::kArtifactVersion;
        j["ensemble"] = std::string(ptlab::to_string(ens));
        j["s"] = o.s;
        j["seed"] = o.seed;
        j.update(ptlab::matrix_json(rho));
        write_json(o.out, j);
      } else {
        auto out = open_output(o.out, true);
        ptlab::write_matrix_binary(out, rho);
      }
    } else if (scan->parsed()) {
      ptlab::ScanConfig cfg;
      cfg.d = o.d;
      cfg.s_values = parse_s_list(o.s_list);
      cfg.trials = o.trials;
      cfg.seed = o.seed;
      cfg.ensemble = ptlab::parse_ensemble(o.ensemble);
      cfg.tol = o.tol;
      cfg.workers = o.workers;
      const auto records = ptlab::ppt_scan(cfg);
      {
        auto out = open_output(o.out);
        ptlab::write_scan_csv(out, records);
      }
      if (!o.crossing_out.empty()) {
        json j;
        j["artifact_version"] = ptlab::kArtifactVersion;
        j["config"] = {{"d", cfg.d}, {"s", cfg.s_values}, {"trials", cfg.trials}, {"seed", cfg.seed},
                       {"ensemble", std::string(ptlab::to_string(cfg.ensemble))}, {"tol", cfg.tol}};
        try {
          const auto c = ptlab::threshold_crossing(records);
          j["crossing"] = ptlab::to_json(c);
          j["alpha_hat"] = c.s_hat / (cfg.d * cfg.d);
        } catch (const ptlab::NumericalFailure& e) {
          j["crossing"] = nullptr;
          j["crossing_error"] = e.what();
        }
        write_json(o.crossing_out, j);
      }
    } else if (semi->parsed()) {
      const auto ens = ptlab::parse_ensemble(o.ensemble);
      const auto rep = ptlab::semicircle_experiment(o.d, o.s, ens, o.seed);
      json j = ptlab::to_json(rep);
      j["config"] = {{"d", o.d}, {"s", o.s}, {"ensemble", o.ensemble}, {"seed", o.seed}};
      write_json(o.out, j);
      if (!o.hist_csv.empty()) {
        auto out = open_output(o.hist_csv);
        ptlab::write_histogram_csv(out, rep.histogram);
      }
    } else if (mp->parsed()) {
      const auto rep = ptlab::marchenko_pastur_baseline(o.d, o.s, o.seed);
      json j = ptlab::to_json(rep);
      j["config"] = {{"d", o.d}, {"s", o.s}, {"seed", o.seed}};
      write_json(o.out, j);
      if (!o.hist_csv.empty()) {
        auto out = open_output(o.hist_csv);
        ptlab::write_histogram_csv(out, rep.histogram);
      }
    } else if (fig->parsed()) {
      const auto ens = ptlab::parse_ensemble(o.ensemble);
      const auto result = ptlab::figure1_reproduction(o.seed, ens);
      const std::filesystem::path dir(o.outdir);
      std::filesystem::create_directories(dir);
      json meta;
      meta["artifact_version"] = ptlab::kArtifactVersion;
      meta["config"] = {{"seed", o.seed}, {"ensemble", o.ensemble}, {"d", 50}};
      meta["caption"] =
          "Eigenvalues of rho^Gamma for one random induced state on C^50 (x) C^50; "
          "s = 2500 (alpha = 1) and s = 10000 (alpha = 4)";
      for (const auto& [name, panel] : {std::pair{"alpha1", &result.alpha1}, std::pair{"alpha4", &result.alpha4}}) {
        const std::string csv = (dir / (std::string("figure1_") + name + "_hist.csv")).string();
        auto out = open_output(csv);
        ptlab::write_histogram_csv(out, panel->histogram);
        json p = ptlab::to_json(panel->report);
        p.erase("histogram");
        p["histogram_csv"] = csv;
        p["lambda_min"] = panel->report.spectrum.values.front();
        p["lambda_max"] = panel->report.spectrum.values.back();
        meta[name] = p;
      }
      write_json((dir / "figure1_meta.json").string(), meta);
    } else if (width->parsed()) {
      if (o.d != 2) throw InvalidArgument("mean-width supports only --d 2");
      const auto ws = ptlab::mean_width_separable(2, o.dirs, o.restarts, o.seed, o.workers);
      const auto wp = ptlab::mean_width_polar_2x2(o.dirs, o.precision, o.seed, o.workers);
      const auto s0 = ptlab::threshold_s0_estimate(wp);
      json j;
      j["artifact_version"] = ptlab::kArtifactVersion;
      j["config"] = {{"d", 2}, {"dirs", o.dirs}, {"restarts", o.restarts}, {"precision", o.precision}, {"seed", o.seed}};
      j["width_separable"] = ptlab::to_json(ws);
      j["width_polar"] = ptlab::to_json(wp);
      j["width_product"] = ws.mean * wp.mean;
      j["width_product_stderr"] = std::hypot(ws.std_error * wp.mean, wp.std_error * ws.mean);
      j["s0"] = s0.s0;
      j["s0_stderr"] = s0.std_error;
      write_json(o.out, j);
    } else if (validate->parsed()) {
      const auto rep = ptlab::sampler_validation(o.n, o.s, o.samples, o.seed, o.workers);
      json j = ptlab::to_json(rep);
      j["config"] = {{"n", o.n}, {"s", o.s}, {"samples", o.samples}, {"seed", o.seed}};
      write_json(o.out, j);
    } else if (sep->parsed()) {
      const auto result = ptlab::separability_scan_2x2(parse_s_list(o.s_list), o.trials, o.seed, o.workers);
      {
        auto out = open_output(o.out);
        ptlab::write_scan_csv(out, result.records);
      }
      if (!o.crossing_out.empty()) {
        json j;
        j["artifact_version"] = ptlab::kArtifactVersion;
        j["config"] = {{"d", 2}, {"s", o.s_list}, {"trials", o.trials}, {"seed", o.seed}};
        j["crossing"] = result.crossing ? ptlab::to_json(*result.crossing) : json(nullptr);
        write_json(o.crossing_out, j);
      }
    }
  } catch (const ptlab::InvalidArgument& e) {
    std::cerr << "ptlab: invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ptlab::NumericalFailure& e) {
    std::cerr << "ptlab: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ptlab: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
