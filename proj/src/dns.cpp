#include "kolmflow/dns.hpp"

#include <cmath>
#include <cstring>
#include <mutex>
#include <random>

#include <fftw3.h>

namespace kolmflow {

namespace {
std::mutex fftw_plan_mutex;
}

void SimConfig::validate() const {
  TorusGrid probe(kappa, Nx, Ny, dealias_fraction);  // reuses its invariants
  (void)probe;
  if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("SimConfig: nu must lie in (0,1)");
  if (!(cfl > 0.0 && cfl <= 0.5)) throw std::invalid_argument("SimConfig: CFL must lie in (0, 0.5]");
  if (amplitude_multiplier < 0.0)
    throw std::invalid_argument("SimConfig: amplitude must be nonnegative");
  if (t_end <= 0.0) throw std::invalid_argument("SimConfig: t_end must be positive");
}

json SimConfig::to_json() const {
  return json{{"kappa", kappa},       {"Nx", Nx},
              {"Ny", Ny},             {"dealias_fraction", dealias_fraction},
              {"nu", nu},             {"t_end", t_end},
              {"cfl", cfl},           {"dt_max", dt_max},
              {"fixed_dt", fixed_dt}, {"pattern", pattern},
              {"amplitude_multiplier", amplitude_multiplier},
              {"seed", seed},         {"output_stride", output_stride}};
}

SimConfig SimConfig::from_json(const json& j) {
  reject_unknown_keys(j, {"kappa", "Nx", "Ny", "dealias_fraction", "nu", "t_end", "cfl",
                          "dt_max", "fixed_dt", "pattern", "amplitude_multiplier", "seed",
                          "output_stride"},
                      "dns config");
  SimConfig c;
  c.kappa = j.value("kappa", c.kappa);
  c.Nx = j.value("Nx", c.Nx);
  c.Ny = j.value("Ny", c.Ny);
  c.dealias_fraction = j.value("dealias_fraction", c.dealias_fraction);
  c.nu = j.value("nu", c.nu);
  c.t_end = j.value("t_end", c.t_end);
  c.cfl = j.value("cfl", c.cfl);
  c.dt_max = j.value("dt_max", c.dt_max);
  c.fixed_dt = j.value("fixed_dt", c.fixed_dt);
  c.pattern = j.value("pattern", c.pattern);
  c.amplitude_multiplier = j.value("amplitude_multiplier", c.amplitude_multiplier);
  c.seed = j.value("seed", c.seed);
  c.output_stride = j.value("output_stride", c.output_stride);
  c.validate();
  return c;
}

struct DnsSolver::Impl {
  SimConfig cfg;
  int Nx, Ny, Nyh;
  double alpha;
  std::vector<cxd> w;        // vorticity, half spectrum, index ix*Nyh + iy
  std::vector<cxd> scratch;  // spectral scratch for the planned transforms
  std::vector<double> grid_scratch;
  std::vector<double> kx, ky, k2;
  std::vector<double> mask;
  fftw_plan plan_c2r, plan_r2c;
  double umax = 1.0, vmax = 0.0;
  // reusable buffers
  std::vector<cxd> psi, tmp, f1, f2, k1, k2s, k3, k4, v1;
  std::vector<double> ug, vg, wg, p1, p2, E, E2;
  double planned_dt = -1.0;

  explicit Impl(const SimConfig& c) : cfg(c), Nx(c.Nx), Ny(c.Ny), Nyh(c.Ny / 2 + 1) {
    alpha = 1.0 / c.kappa;
    const size_t ns = size_t(Nx) * Nyh, ng = size_t(Nx) * Ny;
    w.assign(ns, 0.0);
    scratch.assign(ns, 0.0);
    grid_scratch.assign(ng, 0.0);
    kx.resize(ns);
    ky.resize(ns);
    k2.resize(ns);
    mask.resize(ns);
    const int jcut_x = int(c.dealias_fraction * (Nx / 2));
    const int jcut_y = int(c.dealias_fraction * (Ny / 2));
    for (int ix = 0; ix < Nx; ++ix) {
      const int jx = ix <= Nx / 2 ? ix : ix - Nx;
      for (int iy = 0; iy < Nyh; ++iy) {
        const size_t id = size_t(ix) * Nyh + iy;
        kx[id] = alpha * jx;
        ky[id] = iy;
        k2[id] = kx[id] * kx[id] + double(iy) * iy;
        mask[id] = (std::abs(jx) <= jcut_x && iy <= jcut_y) ? 1.0 : 0.0;
      }
    }
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan_c2r = fftw_plan_dft_c2r_2d(Nx, Ny, reinterpret_cast<fftw_complex*>(scratch.data()),
                                    grid_scratch.data(), FFTW_ESTIMATE);
    plan_r2c = fftw_plan_dft_r2c_2d(Nx, Ny, grid_scratch.data(),
                                    reinterpret_cast<fftw_complex*>(scratch.data()),
                                    FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan_c2r);
    fftw_destroy_plan(plan_r2c);
  }

  void to_grid(const std::vector<cxd>& spec, std::vector<double>& out) {
    std::memcpy(scratch.data(), spec.data(), spec.size() * sizeof(cxd));
    fftw_execute_dft_c2r(plan_c2r, reinterpret_cast<fftw_complex*>(scratch.data()),
                         grid_scratch.data());
    out = grid_scratch;
  }

  void to_spec(const std::vector<double>& grid, std::vector<cxd>& out) {
    grid_scratch = grid;
    fftw_execute_dft_r2c(plan_r2c, grid_scratch.data(),
                         reinterpret_cast<fftw_complex*>(scratch.data()));
    const double inv = 1.0 / (double(Nx) * Ny);
    out.resize(scratch.size());
    for (size_t i = 0; i < scratch.size(); ++i) out[i] = scratch[i] * inv;
  }

  // N(w) = -d_x(u w) - d_y(v w), dealiased
  void nonlinear(const std::vector<cxd>& spec, std::vector<cxd>& out, bool track_umax) {
    const size_t ns = spec.size();
    psi.resize(ns);
    tmp.resize(ns);
    for (size_t i = 0; i < ns; ++i) psi[i] = (k2[i] > 0.0) ? -spec[i] / k2[i] : 0.0;

    for (size_t i = 0; i < ns; ++i) tmp[i] = -iu * ky[i] * psi[i];  // u = -psi_y
    to_grid(tmp, ug);
    for (size_t i = 0; i < ns; ++i) tmp[i] = iu * kx[i] * psi[i];  // v = psi_x
    to_grid(tmp, vg);
    to_grid(spec, wg);

    if (track_umax) {
      double mu = 0.0, mv = 0.0;
      for (size_t i = 0; i < ug.size(); ++i) {
        mu = std::max(mu, std::abs(ug[i]));
        mv = std::max(mv, std::abs(vg[i]));
      }
      umax = mu;
      vmax = mv;
    }

    p1.resize(ug.size());
    p2.resize(ug.size());
    for (size_t i = 0; i < ug.size(); ++i) {
      p1[i] = ug[i] * wg[i];
      p2[i] = vg[i] * wg[i];
    }
    to_spec(p1, f1);
    to_spec(p2, f2);
    out.resize(ns);
    for (size_t i = 0; i < ns; ++i)
      out[i] = mask[i] * (-iu * kx[i] * f1[i] - iu * ky[i] * f2[i]);
  }

  // integrating-factor RK4: exact e^{-nu k^2 t} for the viscous part
  void step(double dt) {
    const size_t ns = w.size();
    if (dt != planned_dt) {
      E.resize(ns);
      E2.resize(ns);
      for (size_t i = 0; i < ns; ++i) {
        E[i] = std::exp(-cfg.nu * k2[i] * dt * 0.5);
        E2[i] = E[i] * E[i];
      }
      planned_dt = dt;
    }
    v1.resize(ns);
    nonlinear(w, k1, true);
    for (size_t i = 0; i < ns; ++i) v1[i] = E[i] * (w[i] + 0.5 * dt * k1[i]);
    nonlinear(v1, k2s, false);
    for (size_t i = 0; i < ns; ++i) v1[i] = E[i] * w[i] + 0.5 * dt * k2s[i];
    nonlinear(v1, k3, false);
    for (size_t i = 0; i < ns; ++i) v1[i] = E2[i] * w[i] + dt * E[i] * k3[i];
    nonlinear(v1, k4, false);
    for (size_t i = 0; i < ns; ++i)
      w[i] = E2[i] * w[i] +
             dt / 6.0 * (E2[i] * k1[i] + 2.0 * E[i] * (k2s[i] + k3[i]) + k4[i]);
  }

  double suggest_dt() const {
    const double dx = 2.0 * pi * cfg.kappa / Nx, dy = 2.0 * pi / Ny;
    const double lim_x = dx / std::max(umax, 1e-9);
    const double lim_y = dy / std::max(vmax, 1e-9);
    return std::min(cfg.dt_max, cfg.cfl * std::min(lim_x, lim_y));
  }

  double weight_of(int iy) const { return (iy == 0 || iy == Ny / 2) ? 1.0 : 2.0; }

  double l2_neq() const {
    double s = 0.0;
    for (int ix = 1; ix < Nx; ++ix) {
      if (ix == 0) continue;
      for (int iy = 0; iy < Nyh; ++iy) {
        const size_t id = size_t(ix) * Nyh + iy;
        s += weight_of(iy) * std::norm(w[id]);
      }
    }
    return std::sqrt(s);
  }

  double u_neq() const {
    double s = 0.0;
    for (int ix = 1; ix < Nx; ++ix)
      for (int iy = 0; iy < Nyh; ++iy) {
        const size_t id = size_t(ix) * Nyh + iy;
        if (k2[id] == 0.0) continue;
        s += weight_of(iy) * std::norm(w[id]) / k2[id];
      }
    return std::sqrt(s);
  }

  // instantaneous spacetime-norm integrands for the nonzero modes
  void xi_rates(double& visc, double& halfdx, double& weighted) {
    visc = halfdx = 0.0;
    for (int ix = 1; ix < Nx; ++ix)
      for (int iy = 0; iy < Nyh; ++iy) {
        const size_t id = size_t(ix) * Nyh + iy;
        const double m = weight_of(iy) * std::norm(w[id]);
        visc += cfg.nu * k2[id] * m;
        if (k2[id] > 0.0) halfdx += std::abs(kx[id]) * m / k2[id];
      }
    // |V'|^{1/2} d_x grad inv-lap f on the grid, V = P_0 U^x of the current state
    const size_t ns = w.size();
    psi.resize(ns);
    tmp.resize(ns);
    for (size_t i = 0; i < ns; ++i) {
      const int ix = int(i / Nyh);
      psi[i] = (k2[i] > 0.0 && ix != 0) ? -w[i] / k2[i] : 0.0;
    }
    for (size_t i = 0; i < ns; ++i) tmp[i] = -kx[i] * kx[i] * psi[i];  // d_x d_x psi
    to_grid(tmp, p1);
    for (size_t i = 0; i < ns; ++i) tmp[i] = iu * kx[i] * (iu * ky[i] * psi[i]);
    to_grid(tmp, p2);
    // V'(y) = P_0 omega restricted... V' = -P_0 Omega + mean handling: use
    // V = P_0 U^x so V'(y) = -P_0 Omega(y) + const; d_y U^x = -Omega at jx = 0
    std::vector<double> vp(Ny, 0.0);
    for (int n = 1; n < Nyh; ++n) {
      const cxd vpn = -w[size_t(0) * Nyh + n];
      for (int j = 0; j < Ny; ++j)
        vp[j] += 2.0 * std::real(vpn * std::polar(1.0, n * 2.0 * pi * j / Ny));
    }
    weighted = 0.0;
    for (int ix = 0; ix < Nx; ++ix)
      for (int j = 0; j < Ny; ++j) {
        const size_t g = size_t(ix) * Ny + j;
        weighted += std::abs(vp[j]) * (sq(p1[g]) + sq(p2[g]));
      }
    weighted /= double(Nx) * Ny;
  }
};

// the ctor skips validate() so the inviscid (nu = 0) conservation oracle can
// drive the stepper directly; experiment entry points validate their configs
DnsSolver::DnsSolver(const SimConfig& cfg) : impl_(std::make_unique<Impl>(cfg)) {}
DnsSolver::~DnsSolver() = default;

void DnsSolver::initialize() {
  const SimConfig& c = impl_->cfg;
  TorusGrid grid(c.kappa, c.Nx, c.Ny, c.dealias_fraction);
  std::fill(impl_->w.begin(), impl_->w.end(), cxd(0.0));
  impl_->w[1] = cxd(0.0, -0.5);  // sin y at (jx = 0, n = 1)
  if (c.amplitude_multiplier > 0.0) {
    Field2D pat = perturbation_pattern(grid, c.pattern, c.seed);
    const double amp = c.amplitude_multiplier * std::cbrt(c.nu);
    for (const auto& [j, m] : pat.modes()) {
      const int ix = j >= 0 ? j : j + c.Nx;
      for (int n = 0; n <= m.max_mode() && n < impl_->Nyh; ++n)
        impl_->w[size_t(ix) * impl_->Nyh + n] += amp * m.at(n);
    }
  }
  for (size_t i = 0; i < impl_->w.size(); ++i) impl_->w[i] *= impl_->mask[i];
  impl_->umax = 1.0;
  impl_->vmax = 0.0;
  t_ = 0.0;
}

void DnsSolver::set_state(const Field2D& omega) {
  std::fill(impl_->w.begin(), impl_->w.end(), cxd(0.0));
  for (const auto& [j, m] : omega.modes()) {
    const int ix = j >= 0 ? j : j + impl_->Nx;
    if (ix < 0 || ix >= impl_->Nx) continue;
    for (int n = 0; n <= m.max_mode() && n < impl_->Nyh; ++n)
      impl_->w[size_t(ix) * impl_->Nyh + n] = m.at(n);
  }
  impl_->umax = 1.0;
  impl_->vmax = 0.0;
  t_ = 0.0;
}

Field2D DnsSolver::state() const {
  const SimConfig& c = impl_->cfg;
  TorusGrid grid(c.kappa, c.Nx, c.Ny, c.dealias_fraction);
  Field2D f(grid);
  const int M = c.Ny / 2 - 1;
  for (int jx = -(c.Nx / 2 - 1); jx <= c.Nx / 2 - 1; ++jx) {
    ModeFunction m(grid.alpha() * jx, M);
    const int ix = jx >= 0 ? jx : jx + c.Nx;
    const int ixm = jx <= 0 ? -jx : c.Nx - jx;
    for (int n = 0; n <= M; ++n) {
      m.at(n) = impl_->w[size_t(ix) * impl_->Nyh + n];
      if (n > 0) m.at(-n) = std::conj(impl_->w[size_t(ixm) * impl_->Nyh + n]);
    }
    bool nonzero = m.coeffs().cwiseAbs().maxCoeff() > 0.0;
    if (nonzero || jx == 0) f.set_mode(jx, std::move(m));
  }
  return f;
}

void DnsSolver::step(double dt) {
  impl_->step(dt);
  t_ += dt;
}

void DnsSolver::xi_rates(double& visc, double& halfdx, double& weighted) {
  impl_->xi_rates(visc, halfdx, weighted);
}

double DnsSolver::suggest_dt() const { return impl_->suggest_dt(); }

double DnsSolver::omega_neq_l2() const { return impl_->l2_neq(); }
double DnsSolver::u_neq_l2() const { return impl_->u_neq(); }

double DnsSolver::energy() const {
  double s = 0.0;
  for (int ix = 0; ix < impl_->Nx; ++ix)
    for (int iy = 0; iy < impl_->Nyh; ++iy) {
      const size_t id = size_t(ix) * impl_->Nyh + iy;
      if (impl_->k2[id] == 0.0) continue;
      s += impl_->weight_of(iy) * std::norm(impl_->w[id]) / impl_->k2[id];
    }
  return 0.5 * s;
}

double DnsSolver::enstrophy() const {
  double s = 0.0;
  for (int ix = 0; ix < impl_->Nx; ++ix)
    for (int iy = 0; iy < impl_->Nyh; ++iy) {
      const size_t id = size_t(ix) * impl_->Nyh + iy;
      s += impl_->weight_of(iy) * std::norm(impl_->w[id]);
    }
  return 0.5 * s;
}

double DnsSolver::shear_deviation_l2() const {
  double s = 0.0;
  const cxd target = cxd(0.0, -0.5) * std::exp(-impl_->cfg.nu * t_);
  for (int ix = 0; ix < impl_->Nx; ++ix)
    for (int iy = 0; iy < impl_->Nyh; ++iy) {
      const size_t id = size_t(ix) * impl_->Nyh + iy;
      cxd v = impl_->w[id];
      if (ix == 0 && iy == 1) v -= target;
      s += impl_->weight_of(iy) * std::norm(v);
    }
  return std::sqrt(s);
}

ModeFunction DnsSolver::shear_profile_mode() const {
  const int M = impl_->Ny / 2 - 1;
  ModeFunction ux(0.0, M);
  for (int n = 1; n <= M && n < impl_->Nyh; ++n) {
    const cxd wn = impl_->w[size_t(0) * impl_->Nyh + n];
    const cxd psin = -wn / (double(n) * n);
    const cxd uxn = -iu * double(n) * psin;
    ux.at(n) = uxn;
    ux.at(-n) = std::conj(uxn);
  }
  return ux;
}

cxd DnsSolver::first_mode_at(double y) const {
  cxd s = 0.0;
  const int Nyh = impl_->Nyh;
  for (int n = 0; n < Nyh; ++n)
    s += impl_->w[size_t(1) * Nyh + n] * std::polar(1.0, n * y);
  for (int n = 1; n < Nyh; ++n)
    s += std::conj(impl_->w[size_t(impl_->Nx - 1) * Nyh + n]) * std::polar(1.0, -n * y);
  return s;
}

Field2D perturbation_pattern(const TorusGrid& grid, const std::string& name,
                             std::uint64_t seed) {
  Field2D f(grid);
  const int M = grid.Ny / 2 - 1;
  auto put = [&](int j, int n, cxd v) {
    if (!f.mode(j)) f.set_mode(j, ModeFunction(grid.alpha() * j, M));
    f.modes().at(j).at(n) = v;
  };
  if (name == "mode21") {
    put(1, 1, 0.25);
    put(1, -1, 0.25);
    put(-1, 1, 0.25);
    put(-1, -1, 0.25);
  } else if (name == "mode41") {
    put(2, 1, 0.25);
    put(2, -1, 0.25);
    put(-2, 1, 0.25);
    put(-2, -1, 0.25);
  } else if (name == "mode21s") {
    put(1, 1, cxd(0, -0.25));
    put(1, -1, cxd(0, 0.25));
    put(-1, 1, cxd(0, -0.25));
    put(-1, -1, cxd(0, 0.25));
  } else if (name == "random_low") {
    std::mt19937_64 rng(seed + 1234567);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int j = 1; j <= 3; ++j)
      for (int n = -3; n <= 3; ++n) {
        cxd v(u(rng), u(rng));
        put(j, n, v);
        put(-j, -n, std::conj(v));
      }
  } else {
    throw std::invalid_argument("perturbation_pattern: unknown pattern '" + name + "'");
  }
  double h3 = 0.0;
  for (const auto& [j, m] : f.modes()) {
    const double k = grid.alpha() * j;
    for (int n = -m.max_mode(); n <= m.max_mode(); ++n)
      h3 += std::pow(1.0 + k * k + double(n) * n, 3.0) * std::norm(m.at(n));
  }
  h3 = std::sqrt(h3);
  for (auto& [j, m] : f.modes()) m.coeffs() /= h3;
  return f;
}

DnsSeries run_experiment(const SimConfig& cfg) {
  cfg.validate();
  DnsSolver solver(cfg);
  solver.initialize();
  DnsSeries out;

  double xi_visc2 = 0.0, xi_halfdx2 = 0.0, xi_weighted2 = 0.0;
  double last_xi_t = 0.0;

  auto log_state = [&](bool accumulate_xi) {
    const double t = solver.time();
    const double wn = solver.omega_neq_l2();
    out.omega_neq.t.push_back(t);
    out.omega_neq.v.push_back(wn);
    out.u_neq.t.push_back(t);
    out.u_neq.v.push_back(solver.u_neq_l2());
    out.shear_dev.t.push_back(t);
    out.shear_dev.v.push_back(solver.shear_deviation_l2());
    out.depletion_0.t.push_back(t);
    out.depletion_0.v.push_back(std::abs(solver.first_mode_at(0.0)));
    out.depletion_pi.t.push_back(t);
    out.depletion_pi.v.push_back(std::abs(solver.first_mode_at(pi)));
    out.xi_linf_l2 = std::max(out.xi_linf_l2, wn);
    if (accumulate_xi) {
      double rv, rh, rw;
      solver.xi_rates(rv, rh, rw);
      const double dt = t - last_xi_t;
      xi_visc2 += rv * dt;
      xi_halfdx2 += rh * dt;
      xi_weighted2 += rw * dt;
      last_xi_t = t;
    }
  };

  log_state(false);
  long long step_count = 0;
  while (solver.time() < cfg.t_end - 1e-12) {
    double dt = (cfg.fixed_dt > 0.0) ? cfg.fixed_dt : solver.suggest_dt();
    dt = std::min(dt, cfg.t_end - solver.time());
    solver.step(dt);
    ++step_count;
    const double check = solver.omega_neq_l2();
    if (!std::isfinite(check) || check > 1e6) {
      out.aborted = true;
      out.abort_time = solver.time();
      break;
    }
    if (step_count % cfg.output_stride == 0 || solver.time() >= cfg.t_end - 1e-12)
      log_state(true);
  }
  out.steps = step_count;
  out.xi_visc = std::sqrt(xi_visc2);
  out.xi_halfdx = std::sqrt(xi_halfdx2);
  out.xi_weighted = std::sqrt(xi_weighted2);
  return out;
}

ScanResult threshold_scan(const std::vector<double>& nu_list,
                          const std::vector<double>& multiplier_list,
                          const std::string& pattern, SimConfig base) {
  if (multiplier_list.empty()) throw std::invalid_argument("threshold_scan: empty multipliers");
  const double span_lo = *std::min_element(multiplier_list.begin(), multiplier_list.end());
  const double span_hi = *std::max_element(multiplier_list.begin(), multiplier_list.end());
  if (span_lo > 0.011 || span_hi < 9.99)
    throw std::invalid_argument("threshold_scan: multipliers must span [0.01, 10]");

  ScanResult res;
  for (double nu : nu_list) {
    std::vector<std::pair<double, ScanOutcome>> per_nu;
    for (double mult : multiplier_list) {
      SimConfig cfg = base;
      cfg.nu = nu;
      cfg.pattern = pattern;
      cfg.amplitude_multiplier = mult;
      cfg.t_end = std::min(base.t_end, 1.0 / nu);
      DnsSeries s = run_experiment(cfg);
      ScanRow row;
      row.nu = nu;
      row.multiplier = mult;
      const double w0 = s.omega_neq.v.front();
      const double wT = s.omega_neq.v.back();
      row.final_ratio = (w0 > 0) ? wT / w0 : 0.0;
      if (s.aborted)
        row.outcome = ScanOutcome::kInconclusive;
      else if (mult == 0.0 || row.final_ratio < 0.01)
        row.outcome = ScanOutcome::kReturnsToShear;
      else
        row.outcome = ScanOutcome::kNotDecayed;
      res.rows.push_back(row);
      per_nu.emplace_back(mult, row.outcome);
    }
    std::sort(per_nu.begin(), per_nu.end());
    double last_ret = 0.0, first_not = 0.0;
    for (const auto& [m, o] : per_nu) {
      if (o == ScanOutcome::kReturnsToShear) last_ret = m;
      if (o == ScanOutcome::kNotDecayed && first_not == 0.0) first_not = m;
    }
    if (last_ret > 0.0 && first_not > last_ret)
      res.transition_multiplier[nu] = std::sqrt(last_ret * first_not);
  }
  return res;
}

RateFit enhanced_dissipation_fit(const Series& omega_neq, double nu) {
  if (omega_neq.t.empty()) throw std::invalid_argument("enhanced_dissipation_fit: empty series");
  double vmax = 0.0;
  for (double v : omega_neq.v) vmax = std::max(vmax, v);
  if (vmax <= 0.0)
    throw std::invalid_argument("enhanced_dissipation_fit: series has no nonzero modes");
  const double t_lo = std::pow(nu, -0.5);
  double t_hi = std::min(omega_neq.t.back(), 1.0 / nu);
  if (omega_neq.t.back() < t_lo * 1.5)
    throw std::invalid_argument("enhanced_dissipation_fit: window not covered");
  const double floor = 1e-11 * vmax;
  for (size_t i = 0; i < omega_neq.t.size(); ++i)
    if (omega_neq.t[i] > t_lo && omega_neq.v[i] < floor) {
      t_hi = std::min(t_hi, omega_neq.t[i]);
      break;
    }
  RateFit f = fit_exponential(omega_neq, t_lo, t_hi);
  f.exponent = -f.exponent;  // report the decay rate as positive
  return f;
}

const char* scan_outcome_name(ScanOutcome o) {
  switch (o) {
    case ScanOutcome::kReturnsToShear: return "RETURNS_TO_SHEAR";
    case ScanOutcome::kNotDecayed: return "NOT_DECAYED";
    default: return "INCONCLUSIVE";
  }
}

}  // namespace kolmflow
