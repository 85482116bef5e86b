#pragma once

#include "ptlab/ensembles.hpp"
#include "ptlab/experiments.hpp"
#include "ptlab/geometry.hpp"
#include "ptlab/spectra.hpp"
#include "ptlab/types.hpp"

#include <json.hpp>

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

namespace ptlab {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw NumericalFailure("failed to format double");
  return std::string(buf.data(), end);
}

inline constexpr const char* kScanCsvHeader =
    "d,s,alpha,trials,n_ppt,p_ppt,stderr,mean_lambda_min_rescaled,seed";

inline void write_scan_csv(std::ostream& out, const std::vector<ScanRecord>& records) {
  out << kScanCsvHeader << '\n';
  for (const ScanRecord& r : records) {
    out << r.d << ',' << r.s << ',' << format_double(r.alpha) << ',' << r.trials << ',' << r.n_ppt
        << ',' << format_double(r.p_ppt) << ',' << format_double(r.std_error) << ','
        << format_double(r.mean_lambda_min_rescaled) << ',' << r.seed << '\n';
  }
}

inline constexpr const char* kHistogramCsvHeader = "bin_left,bin_right,count,density";

inline void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << kHistogramCsvHeader << '\n';
  for (int i = 0; i < h.bins(); ++i) {
    out << format_double(h.bin_edges[i]) << ',' << format_double(h.bin_edges[i + 1]) << ','
        << h.counts[i] << ',' << format_double(h.normalized_density[i]) << '\n';
  }
}

// JSON reports are flat objects; nlohmann serializes doubles as shortest
// round-trip decimals.

inline nlohmann::ordered_json histogram_json(const Histogram& h) {
  nlohmann::ordered_json j;
  j["bin_edges"] = h.bin_edges;
  j["counts"] = h.counts;
  j["density"] = h.normalized_density;
  j["below_range"] = h.below;
  j["above_range"] = h.above;
  return j;
}

inline nlohmann::ordered_json to_json(const SpectralReport& r) {
  nlohmann::ordered_json j;
  j["artifact_version"] = kArtifactVersion;
  j["d"] = r.d;
  j["s"] = r.s;
  j["alpha"] = r.alpha;
  j["ensemble"] = std::string(to_string(r.ensemble));
  j["seed"] = r.seed;
  j["partial_transpose"] = r.partial_transpose;
  j["law"] = r.law.describe();
  if (r.law.kind == SpectralLaw::Kind::marchenko_pastur)
    j["law_normalization"] = "mean 1, variance 1/alpha (spectrum of d^2 rho)";
  j["ks"] = r.ks;
  j["lambda_min_rescaled"] = r.extremes_rescaled.lambda_min;
  j["lambda_max_rescaled"] = r.extremes_rescaled.lambda_max;
  j["predicted_lambda_min"] = r.predicted_extremes.lambda_min;
  j["predicted_lambda_max"] = r.predicted_extremes.lambda_max;
  auto moments = nlohmann::ordered_json::array();
  for (const MomentRow& m : r.central_moments)
    moments.push_back({{"k", m.k}, {"empirical", m.empirical}, {"predicted", m.predicted}});
  j["central_moments"] = moments;
  j["mean_rescaled"] = r.mean_rescaled;
  j["median_eigenvalue"] = r.median_eigenvalue;
  j["histogram"] = histogram_json(r.histogram);
  return j;
}

inline nlohmann::ordered_json to_json(const WidthEstimate& w) {
  nlohmann::ordered_json j;
  j["mean"] = w.mean;
  j["stderr"] = w.std_error;
  j["num_directions"] = w.num_directions;
  j["seed"] = w.seed;
  return j;
}

inline nlohmann::ordered_json to_json(const KsTest& t) {
  return {{"statistic", t.statistic}, {"p_value", t.p_value}, {"critical_1pct", t.critical_1pct}};
}

inline nlohmann::ordered_json to_json(const SamplerValidationReport& r) {
  nlohmann::ordered_json j;
  j["artifact_version"] = kArtifactVersion;
  j["n"] = r.n;
  j["s"] = r.s;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["routes_lambda_min"] = to_json(r.routes_lambda_min);
  j["routes_lambda_max"] = to_json(r.routes_lambda_max);
  j["routes_agree_1pct"] = r.routes_lambda_min.statistic < r.routes_lambda_min.critical_1pct &&
                           r.routes_lambda_max.statistic < r.routes_lambda_max.critical_1pct;
  j["mean_lambda_min_wishart"] = r.mean_lambda_min_wishart;
  j["mean_lambda_min_trace"] = r.mean_lambda_min_trace;
  if (r.density_lambda_min) {
    j["density_lambda_min"] = to_json(*r.density_lambda_min);
    j["density_mean_lambda_min"] = *r.density_mean_lambda_min;
  }
  return j;
}

inline nlohmann::ordered_json to_json(const CrossingEstimate& c) {
  return {{"s_hat", c.s_hat},       {"ci_low", c.ci_low}, {"ci_high", c.ci_high},
          {"slope", c.slope},       {"intercept", c.intercept},
          {"s_center", c.s_center}, {"s_scale", c.s_scale}, {"monotone", c.monotone}};
}

// Matrix files. JSON: {"n", "d1", "d2", "real": [...], "imag": [...]} in
// row-major order plus metadata. Binary: the 8-byte magic "PTLABMAT", u32
// format version (1), u32 reserved (0), u64 n, d1, d2, then n*n (re, im)
// float64 pairs in row-major order; all little-endian.

inline constexpr std::array<char, 8> kMatrixMagic{'P', 'T', 'L', 'A', 'B', 'M', 'A', 'T'};

inline nlohmann::ordered_json matrix_json(const DensityMatrix& rho) {
  nlohmann::ordered_json j;
  j["n"] = rho.dim();
  j["d1"] = rho.split.d1;
  j["d2"] = rho.split.d2;
  std::vector<double> re, im;
  re.reserve(rho.entries.size());
  im.reserve(rho.entries.size());
  for (int i = 0; i < rho.dim(); ++i)
    for (int k = 0; k < rho.dim(); ++k) {
      re.push_back(rho.entries(i, k).real());
      im.push_back(rho.entries(i, k).imag());
    }
  j["real"] = re;
  j["imag"] = im;
  return j;
}

inline DensityMatrix matrix_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const Split split{j.at("d1").get<int>(), j.at("d2").get<int>()};
  require(n >= 1 && split.dim() == n, "matrix file has inconsistent dimensions");
  const auto re = j.at("real").get<std::vector<double>>();
  const auto im = j.at("imag").get<std::vector<double>>();
  require(re.size() == static_cast<std::size_t>(n) * n && im.size() == re.size(),
          "matrix file has the wrong number of entries");
  DensityMatrix rho{ComplexMatrix(n, n), split};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) rho.entries(i, k) = Complex(re[i * n + k], im[i * n + k]);
  return rho;
}

namespace detail {

static_assert(std::endian::native == std::endian::little, "binary matrix I/O assumes little-endian");

template <class T>
void write_raw(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_raw(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InvalidArgument("truncated matrix file");
  return v;
}

}  // namespace detail

inline void write_matrix_binary(std::ostream& out, const DensityMatrix& rho) {
  out.write(kMatrixMagic.data(), kMatrixMagic.size());
  detail::write_raw<std::uint32_t>(out, 1);
  detail::write_raw<std::uint32_t>(out, 0);
  detail::write_raw<std::uint64_t>(out, static_cast<std::uint64_t>(rho.dim()));
  detail::write_raw<std::uint64_t>(out, static_cast<std::uint64_t>(rho.split.d1));
  detail::write_raw<std::uint64_t>(out, static_cast<std::uint64_t>(rho.split.d2));
  for (int i = 0; i < rho.dim(); ++i)
    for (int k = 0; k < rho.dim(); ++k) {
      detail::write_raw<double>(out, rho.entries(i, k).real());
      detail::write_raw<double>(out, rho.entries(i, k).imag());
    }
}

inline DensityMatrix read_matrix_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMatrixMagic) throw InvalidArgument("not a ptlab matrix file");
  const auto version = detail::read_raw<std::uint32_t>(in);
  if (version != 1) throw InvalidArgument("unsupported matrix file version");
  detail::read_raw<std::uint32_t>(in);
  const auto n = detail::read_raw<std::uint64_t>(in);
  const auto d1 = detail::read_raw<std::uint64_t>(in);
  const auto d2 = detail::read_raw<std::uint64_t>(in);
  require(n >= 1 && n <= 1u << 16 && d1 * d2 == n, "matrix file has inconsistent dimensions");
  const int dim = static_cast<int>(n);
  DensityMatrix rho{ComplexMatrix(dim, dim), Split{static_cast<int>(d1), static_cast<int>(d2)}};
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) {
      const double re = detail::read_raw<double>(in);
      const double im = detail::read_raw<double>(in);
      rho.entries(i, k) = Complex(re, im);
    }
  return rho;
}

}  // namespace ptlab
