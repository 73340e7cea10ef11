#pragma once

#include <cstdint>
#include <filesystem>
#include <map>

#include "kolmflow/common.hpp"

#include <json.hpp>

namespace kolmflow {

using json = nlohmann::json;

// Fitted power-law or exponential rate with window and fit quality.
struct RateFit {
  double exponent = 0.0;   // slope on log-log axes, or -rate on semilog
  double prefactor = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  double stderr_ = 0.0;
  double r_squared = 0.0;

  json to_json() const;
};

struct Series {
  std::vector<double> t, v;
};

// least-squares slope of log v against log t on [t_lo, t_hi]; needs >= 8
// points in window, all values > 0
RateFit fit_power_law(const Series& s, double t_lo, double t_hi);

// rate r of v ~ C e^{-r t}: semilog least squares; exponent holds -r
RateFit fit_exponential(const Series& s, double t_lo, double t_hi);

// --- output ------------------------------------------------------------------

std::string format_g(double v);  // shortest round-trip-stable decimal, C locale

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
  ~CsvWriter();
  void row(const std::vector<double>& values);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  FILE* f_;
  size_t ncol_;
};

// standalone SVG line chart; log axes supported
void write_svg_chart(const std::filesystem::path& path, const std::string& title,
                     const std::vector<std::pair<std::string, Series>>& curves,
                     bool logx, bool logy);

// --- reproducibility ----------------------------------------------------------

// FNV-1a over the canonical (sorted-key) JSON dump
std::uint64_t config_digest(const json& config);

struct ExperimentManifest {
  std::string name;
  std::uint64_t digest = 0;
  std::uint64_t seed = 0;
  std::string started, stopped;
  std::vector<std::string> outputs;

  json to_json() const;
  void write(const std::filesystem::path& path) const;
};

// --- suite configuration -------------------------------------------------------

// Parses a schema-versioned config; unknown keys are errors.
json load_config(const std::filesystem::path& path);
void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& context);

struct SuiteOptions {
  std::filesystem::path out_dir = ".";
  int threads = 1;
  std::uint64_t seed = 0;
};

// Runs the configured experiments; returns process exit status (0 = all pass).
int run_suite(const std::filesystem::path& config_path, const SuiteOptions& opt);

std::string timestamp_utc();

}  // namespace kolmflow
