#include "kolmflow/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "kolmflow/acceptance.hpp"
#include "kolmflow/coercivity.hpp"

namespace kolmflow {

json RateFit::to_json() const {
  return json{{"exponent", exponent}, {"prefactor", prefactor},
              {"window", {t_lo, t_hi}}, {"stderr", stderr_},
              {"r_squared", r_squared}};
}

namespace {
RateFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                 double t_lo, double t_hi) {
  const size_t n = x.size();
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  RateFit f;
  f.t_lo = t_lo;
  f.t_hi = t_hi;
  f.exponent = sxy / sxx;
  f.prefactor = std::exp(my - f.exponent * mx);
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (my + f.exponent * (x[i] - mx));
    ss_res += r * r;
  }
  f.r_squared = (syy > 0) ? 1.0 - ss_res / syy : 1.0;
  f.stderr_ = (n > 2) ? std::sqrt(ss_res / ((n - 2) * sxx)) : 0.0;
  return f;
}

void gather(const Series& s, double t_lo, double t_hi, bool log_t,
            std::vector<double>& x, std::vector<double>& y) {
  if (t_lo >= t_hi) throw std::invalid_argument("rate fit: window has t_lo >= t_hi");
  for (size_t i = 0; i < s.t.size(); ++i) {
    if (s.t[i] < t_lo || s.t[i] > t_hi) continue;
    if (!(s.v[i] > 0.0))
      throw std::invalid_argument("rate fit: nonpositive value inside window");
    x.push_back(log_t ? std::log(s.t[i]) : s.t[i]);
    y.push_back(std::log(s.v[i]));
  }
  if (x.size() < 8)
    throw std::invalid_argument("rate fit: fewer than 8 points in window");
}
}  // namespace

RateFit fit_power_law(const Series& s, double t_lo, double t_hi) {
  std::vector<double> x, y;
  gather(s, t_lo, t_hi, true, x, y);
  return fit_line(x, y, t_lo, t_hi);
}

RateFit fit_exponential(const Series& s, double t_lo, double t_hi) {
  std::vector<double> x, y;
  gather(s, t_lo, t_hi, false, x, y);
  return fit_line(x, y, t_lo, t_hi);
}

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : path_(path), ncol_(columns.size()) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  f_ = std::fopen(path.string().c_str(), "wb");
  if (!f_) throw std::runtime_error("CsvWriter: cannot open " + path.string());
  for (size_t i = 0; i < columns.size(); ++i)
    std::fprintf(f_, "%s%s", columns[i].c_str(), i + 1 < columns.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != ncol_) throw std::invalid_argument("CsvWriter: column count mismatch");
  for (size_t i = 0; i < values.size(); ++i)
    std::fprintf(f_, "%s%s", format_g(values[i]).c_str(), i + 1 < values.size() ? "," : "\n");
}

void write_svg_chart(const std::filesystem::path& path, const std::string& title,
                     const std::vector<std::pair<std::string, Series>>& curves,
                     bool logx, bool logy) {
  const int W = 720, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  auto tx = [&](double v) { return logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return logy ? std::log10(v) : v; };
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [name, s] : curves)
    for (size_t i = 0; i < s.t.size(); ++i) {
      if ((logx && s.t[i] <= 0) || (logy && s.v[i] <= 0)) continue;
      xmin = std::min(xmin, tx(s.t[i])); xmax = std::max(xmax, tx(s.t[i]));
      ymin = std::min(ymin, ty(s.v[i])); ymax = std::max(ymax, ty(s.v[i]));
    }
  if (!(xmax > xmin)) { xmax = xmin + 1; }
  if (!(ymax > ymin)) { ymax = ymin + 1; }
  auto px = [&](double v) { return ml + (W - ml - mr) * (tx(v) - xmin) / (xmax - xmin); };
  auto py = [&](double v) { return H - mb - (H - mt - mb) * (ty(v) - ymin) / (ymax - ymin); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_svg_chart: cannot open " + path.string());
  f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n"
    << "<rect width='100%' height='100%' fill='white'/>\n"
    << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='15'>"
    << title << "</text>\n"
    << "<rect x='" << ml << "' y='" << mt << "' width='" << W - ml - mr << "' height='"
    << H - mt - mb << "' fill='none' stroke='#888'/>\n";
  for (int i = 0; i <= 4; ++i) {
    double gx = xmin + (xmax - xmin) * i / 4, gy = ymin + (ymax - ymin) * i / 4;
    double vx = logx ? std::pow(10, gx) : gx, vy = logy ? std::pow(10, gy) : gy;
    f << "<text x='" << ml + (W - ml - mr) * i / 4 << "' y='" << H - mb + 18
      << "' text-anchor='middle' font-size='11'>" << format_g(vx) << "</text>\n";
    f << "<text x='" << ml - 6 << "' y='" << H - mb - (H - mt - mb) * i / 4 + 4
      << "' text-anchor='end' font-size='11'>" << format_g(vy) << "</text>\n";
  }
  int ci = 0;
  for (const auto& [name, s] : curves) {
    f << "<polyline fill='none' stroke='" << colors[ci % 6] << "' stroke-width='1.5' points='";
    for (size_t i = 0; i < s.t.size(); ++i) {
      if ((logx && s.t[i] <= 0) || (logy && s.v[i] <= 0)) continue;
      f << px(s.t[i]) << "," << py(s.v[i]) << " ";
    }
    f << "'/>\n<text x='" << W - mr - 5 << "' y='" << mt + 16 + 16 * ci
      << "' text-anchor='end' font-size='12' fill='" << colors[ci % 6] << "'>" << name
      << "</text>\n";
    ++ci;
  }
  f << "</svg>\n";
}

std::uint64_t config_digest(const json& config) {
  const std::string dump = config.dump();  // nlohmann sorts object keys
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json ExperimentManifest::to_json() const {
  char dig[20];
  std::snprintf(dig, sizeof dig, "%016llx", static_cast<unsigned long long>(digest));
  return json{{"name", name}, {"config_digest", dig}, {"seed", seed},
              {"started", started}, {"stopped", stopped}, {"outputs", outputs}};
}

void ExperimentManifest::write(const std::filesystem::path& path) const {
  std::ofstream f(path);
  f << to_json().dump(2) << "\n";
}

json load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config: parse error in " + path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("schema"))
    throw std::runtime_error("config: missing required key 'schema'");
  if (j["schema"] != 1)
    throw std::runtime_error("config: unsupported schema version " + j["schema"].dump());
  return j;
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw std::runtime_error("config: unknown key '" + it.key() + "' in " + context);
  }
}

int run_suite(const std::filesystem::path& config_path, const SuiteOptions& opt) {
  const json cfg = load_config(config_path);
  reject_unknown_keys(cfg, {"schema", "suite"}, "top level");
  std::filesystem::create_directories(opt.out_dir);

  json report;
  report["schema"] = 1;
  report["started"] = timestamp_utc();
  report["results"] = json::array();
  bool all_pass = true;
  std::string first_failure;

  if (cfg.contains("suite")) {
    for (const json& entry : cfg["suite"]) {
      reject_unknown_keys(entry, {"type", "criteria", "params", "name"}, "suite entry");
      const std::string type = entry.at("type");
      if (type == "acceptance") {
        std::vector<int> ids;
        if (entry.contains("criteria"))
          for (int i : entry["criteria"]) ids.push_back(i);
        else
          for (int i = 1; i <= 11; ++i) ids.push_back(i);
        for (int id : ids) {
          CriterionResult r = run_acceptance_criterion(id, opt.out_dir);
          report["results"].push_back(json{{"criterion", r.id},
                                           {"pass", r.pass},
                                           {"detail", r.detail}});
          if (!r.pass && first_failure.empty())
            first_failure = "criterion " + std::to_string(r.id);
          all_pass = all_pass && r.pass;
        }
      } else if (type == "lemma9") {
        std::vector<double> ks, ss;
        for (double k = 2; k <= 80; k += 2) ks.push_back(k);
        for (int i = 0; i <= 8; ++i) ss.push_back(0.05 * i);
        Lemma9Report rep = check_lemma9(ks, 500, ss);
        const bool pass = rep.min_slack_b >= -1e-9 && rep.min_slack_c >= -1e-9;
        report["results"].push_back(json{{"experiment", "lemma9"},
                                         {"pass", pass},
                                         {"min_slack_b", rep.min_slack_b},
                                         {"min_slack_c", rep.min_slack_c}});
        if (!pass && first_failure.empty()) first_failure = "lemma9";
        all_pass = all_pass && pass;
      } else {
        throw std::runtime_error("config: unknown suite entry type '" + type + "'");
      }
    }
  }

  report["stopped"] = timestamp_utc();
  report["pass"] = all_pass;
  ExperimentManifest man;
  man.name = "suite";
  man.digest = config_digest(cfg);
  man.seed = opt.seed;
  man.started = report["started"];
  man.stopped = report["stopped"];
  man.outputs = {(opt.out_dir / "report.json").string()};
  man.write(opt.out_dir / "suite_manifest.json");
  std::ofstream f(opt.out_dir / "report.json");
  f << report.dump(2) << "\n";
  if (!all_pass) std::fprintf(stderr, "suite failed: %s\n", first_failure.c_str());
  return all_pass ? 0 : 1;
}

}  // namespace kolmflow
