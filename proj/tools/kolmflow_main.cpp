#include <cstdio>
#include <filesystem>

#include <CLI11.hpp>

#include "kolmflow/acceptance.hpp"
#include "kolmflow/coercivity.hpp"
#include "kolmflow/dns.hpp"
#include "kolmflow/green.hpp"
#include "kolmflow/linear_euler.hpp"
#include "kolmflow/quasilinear.hpp"
#include "kolmflow/resolvent.hpp"

namespace fs = std::filesystem;
using namespace kolmflow;

namespace {

int cmd_coercivity(const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<double> ks, ss;
  for (double k = 2; k <= 80; k += 2) ks.push_back(k);
  for (int i = 0; i <= 8; ++i) ss.push_back(0.05 * i);

  CsvWriter csv(out_dir / "coercivity.csv",
                {"n", "k", "s", "a", "b", "c", "slack_b", "slack_c"});
  for (double s : ss)
    for (double k : ks)
      for (long long n = -500; n <= 500; n += 10) {
        SequenceTriple t = sequence_abc(n, k, s);
        const double ans = std::pow(t.a, s);
        csv.row({double(n), k, s, t.a, t.b, t.c, t.b - k * k * ans,
                 t.c - delta_s(s) * ans});
      }

  Lemma9Report rep = check_lemma9(ks, 500, ss);
  json summary{{"min_slack_b", rep.min_slack_b},
               {"min_slack_c", rep.min_slack_c},
               {"argmin_b", {{"n", rep.argmin_b.n}, {"k", rep.argmin_b.k}, {"s", rep.argmin_b.s}}},
               {"argmin_c", {{"n", rep.argmin_c.n}, {"k", rep.argmin_c.k}, {"s", rep.argmin_c.s}}},
               {"points", rep.points}};
  std::FILE* f = std::fopen((out_dir / "coercivity_summary.json").string().c_str(), "w");
  std::fprintf(f, "%s\n", summary.dump(2).c_str());
  std::fclose(f);
  std::printf("coercivity: min_slack_b=%g min_slack_c=%g over %lld points\n",
              rep.min_slack_b, rep.min_slack_c, rep.points);
  return (rep.min_slack_b >= -1e-9 && rep.min_slack_c >= -1e-9) ? 0 : 1;
}

int cmd_linear_euler(const fs::path& out_dir, double k, int Ny, double t_end, double tol,
                     const std::string& preset) {
  fs::create_directories(out_dir);
  ModeFunction w0 = linear_euler_preset(preset, k, Ny / 2);
  std::vector<double> tg = geomspace(1.0, t_end, 240);
  tg.insert(tg.begin(), 0.0);
  LinearTrajectory traj = evolve_linearized_euler(w0, tg, tol);
  RateReport rep = measure_rates(traj);

  CsvWriter csv(out_dir / "linear_euler.csv",
                {"t", "sup_psi", "omega_at_0", "omega_at_pi", "star_norm", "H1_profile_norm"});
  for (size_t i = 0; i < rep.sup_psi.t.size(); ++i)
    csv.row({rep.sup_psi.t[i], rep.sup_psi.v[i], rep.omega_at_y1.v[i], rep.omega_at_y2.v[i],
             rep.star.v[i], rep.h2_profile.v[i]});

  json fits;
  for (const auto& [name, fit] : rep.fits) fits[name] = fit.to_json();
  fits["star_drift"] = rep.star_drift;
  std::FILE* f = std::fopen((out_dir / "linear_euler_fits.json").string().c_str(), "w");
  std::fprintf(f, "%s\n", fits.dump(2).c_str());
  std::fclose(f);
  write_svg_chart(out_dir / "linear_euler.svg", "linearized Euler decay",
                  {{"sup|psi|", rep.sup_psi},
                   {"|omega(0)|", rep.omega_at_y1},
                   {"|omega(pi)|", rep.omega_at_y2}},
                  true, true);
  std::printf("linear-euler: exponents sup_psi=%.3f omega@0=%.3f omega@pi=%.3f drift=%.2e\n",
              rep.fits["sup_psi"].exponent, rep.fits["omega_at_y1"].exponent,
              rep.fits["omega_at_y2"].exponent, rep.star_drift);
  return 0;
}

int cmd_resolvent(const fs::path& out_dir, int N) {
  fs::create_directories(out_dir);
  ShearProfile cosv = ShearProfile::cosine();
  const std::vector<double> ks = {2, 6, 12, 20};
  std::vector<double> lam;
  for (double l = -1.5; l <= 1.5 + 1e-9; l += 0.1) lam.push_back(l);

  auto ray = rayleigh_constant_sweep(ks, lam, {1e-1, 1e-2, 1e-3, 1e-4}, N, cosv);
  auto ns = ns_constant_sweep(ks, lam, {1e-1, 1e-2, 1e-3}, N, cosv);

  CsvWriter csv(out_dir / "resolvent.csv",
                {"k", "lambda", "eps_or_nu", "theta", "ratio1", "ratio2", "condition"});
  for (const auto& p : ray)
    csv.row({p.k, p.lambda, p.eps_or_nu, p.theta, p.ratio1, p.ratio2, p.condition});
  for (const auto& p : ns)
    csv.row({p.k, p.lambda, p.eps_or_nu, p.theta, p.ratio1, p.ratio2, p.condition});

  json summary;
  for (const auto& [slice, v] : sup_ratio_by_slice(ray))
    summary["rayleigh_sup"][format_g(slice)] = v;
  for (const auto& [slice, v] : sup_ratio_by_slice(ns)) summary["ns_sup"][format_g(slice)] = v;
  std::FILE* f = std::fopen((out_dir / "resolvent_summary.json").string().c_str(), "w");
  std::fprintf(f, "%s\n", summary.dump(2).c_str());
  std::fclose(f);
  std::printf("resolvent: wrote %zu probes\n", ray.size() + ns.size());
  return 0;
}

int cmd_quasilinear(const fs::path& out_dir, double nu, int Ny, double dt) {
  fs::create_directories(out_dir);
  TorusGrid grid(0.5, 16, Ny);
  Field2D w0(grid);
  const int M = Ny / 2 - 1;
  ModeFunction mp(grid.alpha(), M), mm(-grid.alpha(), M);
  mp.at(1) = 0.25;
  mp.at(-1) = 0.25;
  mm.at(1) = 0.25;
  mm.at(-1) = 0.25;
  const double amp = std::cbrt(nu) / 10.0;
  double h3 = 0.0;
  for (int n : {-1, 1})
    h3 += 2.0 * std::pow(1.0 + sq(grid.alpha()) + double(n) * n, 3.0) * std::norm(mp.at(n));
  mp.coeffs() *= amp / std::sqrt(h3);
  mm.coeffs() *= amp / std::sqrt(h3);
  w0.set_mode(1, mp);
  w0.set_mode(-1, mm);

  const double T1 = std::pow(nu, -4.0 / 9.0);
  std::vector<double> tg;
  for (double t = 0.0; t <= T1; t += dt) tg.push_back(t);
  ShearProfile cosv = ShearProfile::cosine();
  ApproxSolution sol = build_approx_solution(w0, cosv, nu, tg);
  ErrorLedger led = error_ledger(sol, w0, cosv);

  CsvWriter csv(out_dir / "quasilinear.csv",
                {"t", "sup_dx_omegaL", "sup_uLy", "ErL_L2", "envelope_c"});
  for (size_t i = 0; i < led.t.size(); ++i)
    csv.row({led.t[i], led.sup_dx_omega[i], led.sup_uLy[i], led.er_l2[i],
             led.er_l2[i] / (led.shape_sum[i] * led.h3_norm)});
  json summary{{"envelope_constant", led.envelope_constant}, {"h3_norm", led.h3_norm}};
  std::FILE* f = std::fopen((out_dir / "quasilinear_summary.json").string().c_str(), "w");
  std::fprintf(f, "%s\n", summary.dump(2).c_str());
  std::fclose(f);
  std::printf("quasilinear: envelope constant %.4g\n", led.envelope_constant);
  return 0;
}

int cmd_dns(const fs::path& out_dir, const fs::path& config_path) {
  fs::create_directories(out_dir);
  SimConfig cfg;
  json jcfg;
  if (!config_path.empty()) {
    jcfg = load_config(config_path);
    reject_unknown_keys(jcfg, {"schema", "dns"}, "dns config file");
    cfg = SimConfig::from_json(jcfg.at("dns"));
  } else {
    jcfg = json{{"schema", 1}, {"dns", cfg.to_json()}};
  }

  ExperimentManifest man;
  man.name = "dns";
  man.digest = config_digest(jcfg);
  man.seed = cfg.seed;
  man.started = timestamp_utc();

  DnsSeries s = run_experiment(cfg);
  {
    CsvWriter csv(out_dir / "dns_series.csv",
                  {"t", "omega_neq_L2", "u_neq_L2", "shear_deviation_L2",
                   "depletion_probe_0", "depletion_probe_pi"});
    for (size_t i = 0; i < s.omega_neq.t.size(); ++i)
      csv.row({s.omega_neq.t[i], s.omega_neq.v[i], s.u_neq.v[i], s.shear_dev.v[i],
               s.depletion_0.v[i], s.depletion_pi.v[i]});
  }
  write_svg_chart(out_dir / "dns_series.svg", "DNS diagnostics",
                  {{"omega_neq", s.omega_neq}, {"u_neq", s.u_neq}}, false, true);

  man.stopped = timestamp_utc();
  man.outputs = {(out_dir / "dns_series.csv").string(), (out_dir / "dns_series.svg").string()};
  man.write(out_dir / "dns_manifest.json");

  json extras{{"steps", s.steps},
              {"aborted", s.aborted},
              {"X_I", {{"linf_l2", s.xi_linf_l2},
                       {"visc", s.xi_visc},
                       {"half_dx", s.xi_halfdx},
                       {"weighted", s.xi_weighted}}}};
  std::FILE* f = std::fopen((out_dir / "dns_report.json").string().c_str(), "w");
  std::fprintf(f, "%s\n", extras.dump(2).c_str());
  std::fclose(f);
  std::printf("dns: %lld steps, final omega_neq %.4g%s\n", s.steps, s.omega_neq.v.back(),
              s.aborted ? " [ABORTED]" : "");
  return s.aborted ? 1 : 0;
}

int cmd_report(const fs::path& out_dir, const fs::path& config_path) {
  if (!config_path.empty()) {
    SuiteOptions opt;
    opt.out_dir = out_dir;
    return run_suite(config_path, opt);
  }
  fs::create_directories(out_dir);
  json report;
  report["schema"] = 1;
  report["results"] = json::array();
  bool all = true;
  for (int id = 1; id <= 11; ++id) {
    CriterionResult r = run_acceptance_criterion(id, out_dir);
    std::printf("[%s] criterion %d (%.1fs): %s\n", r.pass ? "PASS" : "FAIL", id, r.seconds,
                r.detail.c_str());
    report["results"].push_back(
        json{{"criterion", id}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
    all = all && r.pass;
  }
  report["pass"] = all;
  std::FILE* f = std::fopen((out_dir / "report.json").string().c_str(), "w");
  std::fprintf(f, "%s\n", report.dump(2).c_str());
  std::fclose(f);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kolmflow: spectral laboratory for Kolmogorov-flow stability"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  std::string config_path;
  int threads = 1;
  std::uint64_t seed = 0;
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--config", config_path, "configuration file (JSON, schema 1)");
  app.add_option("--threads", threads, "worker threads for sweeps");
  app.add_option("--seed", seed, "seed for seeded experiments");

  auto* sc_coer = app.add_subcommand("coercivity", "Lemma-9 sequence sweep and CSV");

  auto* sc_le = app.add_subcommand("linear-euler", "linearized Euler rates");
  double le_k = 2.0, le_tend = 100.0, le_tol = 1e-10;
  int le_ny = 256;
  std::string le_preset = "critical_pair";
  sc_le->add_option("--k", le_k, "x-wavenumber (|k| > 1)");
  sc_le->add_option("--Ny", le_ny, "y-mode count");
  sc_le->add_option("--t-end", le_tend, "final time");
  sc_le->add_option("--tol", le_tol, "integrator tolerance");
  sc_le->add_option("--preset", le_preset, "initial data preset");

  auto* sc_res = app.add_subcommand("resolvent", "Rayleigh and NS resolvent sweeps");
  int res_n = 128;
  sc_res->add_option("--N", res_n, "y-truncation");

  auto* sc_quasi = app.add_subcommand("quasilinear", "approximate solution error ledger");
  double q_nu = 1e-3, q_dt = 0.1;
  int q_ny = 130;
  sc_quasi->add_option("--nu", q_nu, "viscosity");
  sc_quasi->add_option("--Ny", q_ny, "y-mode count");
  sc_quasi->add_option("--dt", q_dt, "time-grid spacing");

  auto* sc_dns = app.add_subcommand("dns", "nonlinear pseudo-spectral simulation");

  auto* sc_report = app.add_subcommand("report", "run the acceptance suite or a config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc_coer->parsed()) return cmd_coercivity(out_dir);
    if (sc_le->parsed()) return cmd_linear_euler(out_dir, le_k, le_ny, le_tend, le_tol, le_preset);
    if (sc_res->parsed()) return cmd_resolvent(out_dir, res_n);
    if (sc_quasi->parsed()) return cmd_quasilinear(out_dir, q_nu, q_ny, q_dt);
    if (sc_dns->parsed()) return cmd_dns(out_dir, config_path);
    if (sc_report->parsed()) return cmd_report(out_dir, config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
