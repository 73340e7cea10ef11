#include "kolmflow/quasilinear.hpp"

#include <cmath>

#include "kolmflow/linear_euler.hpp"

namespace kolmflow {

namespace {

double wrap_pm(double x) {
  x = std::fmod(x + pi, 2.0 * pi);
  if (x < 0) x += 2.0 * pi;
  return x - pi;
}

cxd eval_fourier(const VectorXcd& c, double y) {
  const int M = (static_cast<int>(c.size()) - 1) / 2;
  const cxd e = std::polar(1.0, y);
  cxd s = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) s = s * e + c[i];
  return s * std::polar(1.0, -M * y);
}

cxd eval_fourier_deriv(const VectorXcd& c, double y) {
  const int M = (static_cast<int>(c.size()) - 1) / 2;
  cxd s = 0.0;
  for (int n = -M; n <= M; ++n) s += iu * double(n) * c[n + M] * std::polar(1.0, n * y);
  return s;
}

VectorXcd analyze(const std::vector<double>& vals) {
  const int G = static_cast<int>(vals.size());
  const int M = G / 2 - 1;
  VectorXcd c(2 * M + 1);
  for (int n = -M; n <= M; ++n) {
    cxd s = 0.0;
    for (int j = 0; j < G; ++j) s += vals[j] * std::polar(1.0, -n * 2.0 * pi * j / G);
    c[n + M] = s / double(G);
  }
  return c;
}

}  // namespace

double MorseData::theta(double y) const { return y + std::real(eval_fourier(phi_, y)); }

double MorseData::theta_inverse(double z) const {
  return z + std::real(eval_fourier(phi_inv_, z));
}

double MorseData::residual_sup(const ShearProfile& profile, int sample_factor) const {
  const int G = grid_n_ * sample_factor;
  double mx = 0.0;
  for (int i = 0; i < G; ++i) {
    const double y = 2.0 * pi * i / G;
    mx = std::max(mx, std::abs(profile.V(y) - a * std::cos(theta(y)) - d));
  }
  return mx;
}

MorseData morse_transform(const ShearProfile& profile, int grid_n) {
  MorseData md;
  md.grid_n_ = grid_n;
  md.a = (profile.vmax() - profile.vmin()) / 2.0;
  md.d = (profile.vmax() + profile.vmin()) / 2.0;
  const double y1 = profile.y1(), y2 = profile.y2();

  auto vtilde = [&](double y) {
    return std::clamp((profile.V(y) - md.d) / md.a, -1.0, 1.0);
  };

  // theta via arccos branches, with square-root forms near the critical
  // points where arccos loses accuracy
  auto theta_raw = [&](double y) {
    const double d1 = wrap_pm(y - y1), d2 = wrap_pm(y - y2);
    const double vt = vtilde(y);
    double th;
    if (std::abs(d1) <= 0.3) {
      const double s1 = (d1 >= 0 ? 1.0 : -1.0) * std::sqrt(std::max(0.0, (1.0 - vt) / 2.0));
      th = 2.0 * std::asin(std::clamp(s1, -1.0, 1.0));
    } else if (std::abs(d2) <= 0.3) {
      const double s2 = (d2 <= 0 ? 1.0 : -1.0) * std::sqrt(std::max(0.0, (1.0 + vt) / 2.0));
      th = 2.0 * std::acos(std::clamp(s2, -1.0, 1.0));
    } else if (d1 > 0 && d2 < 0) {
      th = std::acos(vt);  // increasing branch between the critical points
    } else {
      th = 2.0 * pi - std::acos(vt);
    }
    return th;
  };

  std::vector<double> phi_vals(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    const double y = 2.0 * pi * i / grid_n;
    phi_vals[i] = wrap_pm(theta_raw(y) - y);
  }
  md.phi_ = analyze(phi_vals);

  // monotonicity of the sampled map
  for (int i = 0; i < grid_n; ++i) {
    const double ya = 2.0 * pi * i / grid_n, yb = 2.0 * pi * (i + 1) / grid_n;
    const double ta = ya + phi_vals[i],
                 tb = yb + (i + 1 < grid_n ? phi_vals[i + 1] : phi_vals[0] + 2.0 * pi);
    if (!(tb > ta))
      throw std::invalid_argument("morse_transform: theta is not strictly increasing");
  }

  // invert theta(y) = z by Newton with bisection safeguard
  std::vector<double> inv_vals(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    const double z = 2.0 * pi * i / grid_n;
    double y = z;
    for (int it = 0; it < 60; ++it) {
      const double f = y + std::real(eval_fourier(md.phi_, y)) - z;
      const double fp = 1.0 + std::real(eval_fourier_deriv(md.phi_, y));
      const double step = f / std::max(fp, 0.05);
      y -= step;
      if (std::abs(step) < 1e-15) break;
    }
    inv_vals[i] = wrap_pm(y - z);
  }
  md.phi_inv_ = analyze(inv_vals);

  const double resid = md.residual_sup(profile);
  if (resid > 1e-6)
    throw std::invalid_argument("morse_transform: conjugation residual " +
                                std::to_string(resid) + " too large");
  return md;
}

double t_star(double t, double nu) {
  if (!(nu > 0.0) || t < 0.0) throw std::invalid_argument("t_star: need nu > 0, t >= 0");
  return -std::expm1(-nu * t) / nu;
}

double gamma1(double t, double nu) {
  if (!(nu > 0.0) || t < 0.0) throw std::invalid_argument("gamma1: need nu > 0, t >= 0");
  const double x = nu * t;
  if (x < 1e-4) {
    // series of nu^3 gamma_1 in x; coefficients (-1)^j (2 - 2^{j-1})/j!
    double term = 0.0, fact = 2.0;  // j = 2: 2! precomputed below
    double sum = 0.0, xp = x * x;
    for (int j = 3; j <= 12; ++j) {
      fact *= j;
      xp *= x;
      const double cj = ((j % 2 == 0) ? 1.0 : -1.0) * (2.0 - std::pow(2.0, j - 1)) / fact;
      sum += cj * xp;
      (void)term;
    }
    return sum / (nu * nu * nu);
  }
  return (t - std::expm1(-2.0 * nu * t) / (2.0 * nu) + 2.0 * std::expm1(-nu * t) / nu) / nu;
}

double eta_cutoff(double s) {
  const double u = std::abs(s);
  if (u <= 1.0) return 1.0;
  if (u >= 2.0) return 0.0;
  auto mollifier = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double x = 2.0 - u;  // in (0,1)
  return mollifier(x) / (mollifier(x) + mollifier(1.0 - x));
}

ApproxSolution build_approx_solution(const Field2D& w0, const ShearProfile& profile,
                                     double nu, const std::vector<double>& t_grid,
                                     double tol) {
  if (t_grid.size() < 2) throw std::invalid_argument("build_approx_solution: need a time grid");
  const ModeFunction mean_mode = project_zero(w0);
  if (mean_mode.coeffs().cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("build_approx_solution: initial data must be x-mean-free");

  const TorusGrid& grid = w0.grid();
  ApproxSolution sol;
  sol.nu = nu;
  sol.alpha = grid.alpha();
  MorseData md = morse_transform(profile, std::max(256, grid.Ny));

  const double kcut = std::pow(nu, -1.0 / 3.0);
  int M = 0;
  for (const auto& [j, m] : w0.modes())
    if (j != 0) M = std::max(M, m.max_mode());
  if (M == 0) M = grid.Ny / 2 - 1;
  sol.max_mode = M;
  const int P = 2 * M + 2;

  std::vector<double> theta_pts(P), theta_inv_pts(P), vp2(P);
  for (int i = 0; i < P; ++i) {
    const double y = 2.0 * pi * i / P;
    theta_pts[i] = md.theta(y);
    theta_inv_pts[i] = md.theta_inverse(y);
    vp2[i] = sq(profile.Vp(y));
  }

  std::vector<double> tau(t_grid.size());
  for (size_t i = 0; i < t_grid.size(); ++i) tau[i] = md.a * t_star(t_grid[i], nu);

  sol.times = t_grid;
  for (const auto& [j, m] : w0.modes()) {
    if (j == 0) continue;
    const double k = sol.alpha * j;
    if (std::abs(k) > kcut) continue;  // Lambda_* truncation
    if (m.coeffs().cwiseAbs().maxCoeff() == 0.0) continue;
    sol.kj.push_back(j);

    // transport initial data through theta
    std::vector<cxd> vals(P);
    for (int i = 0; i < P; ++i) vals[i] = m.evaluate(theta_inv_pts[i]);
    VectorXcd w0t(2 * M + 1);
    {
      VectorXcd c(P);
      for (int i = 0; i < P; ++i) c[i] = vals[i];
      ModeFunction tmp = ModeFunction::from_grid(k, c, M);
      w0t = tmp.coeffs();
    }

    // rescaled-time evolution
    std::vector<double> tau_pos(tau.begin(), tau.end());
    LinearTrajectory traj = evolve_linearized_euler(ModeFunction(k, w0t), tau_pos, tol);

    std::vector<VectorXcd>& dest = sol.wk2[j];
    dest.resize(t_grid.size());
    for (size_t it = 0; it < t_grid.size(); ++it) {
      const double t = t_grid[it];
      const double ts = t_star(t, nu);
      const double g1 = gamma1(t, nu);
      const cxd phase = std::polar(1.0, -k * md.d * ts);
      ModeFunction wt(k, traj.states[it]);
      VectorXcd gv(P);
      for (int i = 0; i < P; ++i) {
        const double damp = std::exp(-nu * k * k * g1 * vp2[i]);
        gv[i] = wt.evaluate(theta_pts[i]) * phase * damp;
      }
      dest[it] = ModeFunction::from_grid(k, gv, M).coeffs();
    }
  }
  return sol;
}

void ApproxSolution::split(size_t time_index, const ShearProfile& profile,
                           std::map<int, VectorXcd>& wk3,
                           std::map<int, VectorXcd>& wks) const {
  const double t = times.at(time_index);
  const int M = max_mode;
  const int P = 2 * M + 2;
  std::vector<double> cut(P);
  for (int i = 0; i < P; ++i)
    cut[i] = eta_cutoff(std::sqrt(std::max(t, 0.0)) * profile.Vp(2.0 * pi * i / P));
  for (const auto& [j, series] : wk2) {
    const double k = alpha * j;
    ModeFunction m(k, series.at(time_index));
    VectorXcd g = m.to_grid(P);
    VectorXcd g3(P), gs(P);
    for (int i = 0; i < P; ++i) {
      g3[i] = cut[i] * g[i];
      gs[i] = (1.0 - cut[i]) * g[i];
    }
    wk3[j] = ModeFunction::from_grid(k, g3, M).coeffs();
    wks[j] = ModeFunction::from_grid(k, gs, M).coeffs();
  }
}

ErrorLedger error_ledger(const ApproxSolution& sol, const Field2D& w0,
                         const ShearProfile& profile) {
  const size_t T = sol.times.size();
  if (T < 5) throw std::invalid_argument("error_ledger: need at least 5 time samples");
  const double dt = sol.times[1] - sol.times[0];
  for (size_t i = 1; i + 1 < T; ++i)
    if (std::abs(sol.times[i + 1] - sol.times[i] - dt) > 1e-9 * dt)
      throw std::invalid_argument("error_ledger: time grid must be uniform");

  const double nu = sol.nu;
  const int M = sol.max_mode;
  const int P = 2 * M + 2;
  std::vector<double> Vg(P);
  for (int i = 0; i < P; ++i) Vg[i] = profile.V(2.0 * pi * i / P);

  ErrorLedger led;
  double h3 = 0.0;
  for (const auto& [j, m] : w0.modes()) {
    const double k = w0.grid().alpha() * j;
    for (int n = -m.max_mode(); n <= m.max_mode(); ++n)
      h3 += std::pow(1.0 + k * k + double(n) * n, 3.0) * std::norm(m.at(n));
  }
  led.h3_norm = std::sqrt(h3);

  const int x_pts = 64;
  for (size_t it = 2; it + 2 < T; ++it) {
    const double t = sol.times[it];
    double er2 = 0.0;
    std::vector<cxd> dxw_prof(size_t(x_pts) * P, 0.0), uly_prof(size_t(x_pts) * P, 0.0);
    for (const auto& [j, series] : sol.wk2) {
      const double k = sol.alpha * j;
      // 5-point 4th-order time derivative
      VectorXcd dwdt = (series[it - 2] - 8.0 * series[it - 1] + 8.0 * series[it + 1] -
                        series[it + 2]) /
                       (12.0 * dt);
      const VectorXcd& wv = series[it];
      VectorXcd lap(2 * M + 1), psi(2 * M + 1);
      for (int n = -M; n <= M; ++n) {
        const double a = double(n) * n + k * k;
        lap[n + M] = -a * wv[n + M];
        psi[n + M] = -wv[n + M] / a;
      }
      // V (w + psi) pointwise
      ModeFunction wm(k, wv), pm(k, psi);
      VectorXcd sumg = wm.to_grid(P) + pm.to_grid(P);
      for (int i = 0; i < P; ++i) sumg[i] *= Vg[i];
      VectorXcd vterm = ModeFunction::from_grid(k, sumg, M).coeffs();
      VectorXcd Wk = dwdt - nu * lap + iu * k * std::exp(-nu * t) * vterm;
      er2 += Wk.squaredNorm();

      // sup diagnostics
      VectorXcd wg = wm.to_grid(P), pg = pm.to_grid(P);
      for (int ix = 0; ix < x_pts; ++ix) {
        const cxd ph = std::polar(1.0, 2.0 * pi * j * ix / x_pts);
        for (int i = 0; i < P; ++i) {
          dxw_prof[size_t(ix) * P + i] += iu * k * wg[i] * ph;
          uly_prof[size_t(ix) * P + i] += iu * k * pg[i] * ph;
        }
      }
    }
    double sup_dx = 0.0, sup_uy = 0.0;
    for (size_t q = 0; q < dxw_prof.size(); ++q) {
      sup_dx = std::max(sup_dx, std::abs(dxw_prof[q]));
      sup_uy = std::max(sup_uy, std::abs(uly_prof[q]));
    }

    const double at = std::sqrt(1.0 + t * t);
    const double nut3 = nu * t * t * t;
    const double anut3 = std::sqrt(1.0 + nut3 * nut3);
    const double shape = nu * at / anut3 + std::cbrt(nu) / (at * at) +
                         std::sqrt(std::abs(nut3)) / (at * at);
    led.t.push_back(t);
    led.er_l2.push_back(std::sqrt(er2));
    led.shape_sum.push_back(shape);
    led.sup_dx_omega.push_back(sup_dx);
    led.sup_uLy.push_back(sup_uy);
    if (led.h3_norm > 0.0)
      led.envelope_constant =
          std::max(led.envelope_constant, std::sqrt(er2) / (shape * led.h3_norm));
  }
  return led;
}

}  // namespace kolmflow
