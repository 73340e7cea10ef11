#include "kolmflow/linear_euler.hpp"

#include <cmath>

#include "kolmflow/operators.hpp"

namespace kolmflow {

namespace {

struct Dopri5 {
  double k;
  VectorXcd tmp;

  void rhs(const VectorXcd& y, VectorXcd& dy) {
    apply_B_band(k, y, dy);
    dy *= cxd(0.0, -k);
  }

  // advances y from t to t_target, adapting the step; tol acts as rtol and
  // scaled atol together
  void advance(VectorXcd& y, double& t, double t_target, double tol) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double scale0 = std::max(1e-300, y.norm());
    double h = std::min(0.1 / std::max(1.0, std::abs(k)), t_target - t);
    VectorXcd k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), k5(y.size()),
        k6(y.size()), k7(y.size()), yt(y.size()), ynew(y.size()), err(y.size());
    rhs(y, k1);
    while (t < t_target) {
      h = std::min(h, t_target - t);
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        throw std::runtime_error("evolve_linearized_euler: step size underflow at t = " +
                                 std::to_string(t));
      yt = y + h * a21 * k1;
      rhs(yt, k2);
      yt = y + h * (a31 * k1 + a32 * k2);
      rhs(yt, k3);
      yt = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(yt, k4);
      yt = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(yt, k5);
      yt = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(yt, k6);
      ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs(ynew, k7);
      err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double scale = tol * std::max(scale0, std::max(y.norm(), ynew.norm()));
      const double enorm = err.norm() / scale;
      if (enorm <= 1.0) {
        t += h;
        y.swap(ynew);
        k1.swap(k7);  // first-same-as-last
      }
      const double fac = 0.9 * std::pow(std::max(enorm, 1e-10), -0.2);
      h *= std::clamp(fac, 0.2, 5.0);
    }
  }
};

}  // namespace

LinearTrajectory evolve_linearized_euler(const ModeFunction& w0,
                                         const std::vector<double>& t_grid, double tol) {
  const double k = w0.k();
  if (std::abs(k) <= 1.0)
    throw std::invalid_argument("evolve_linearized_euler: requires |k| > 1");
  if (!(tol > 0.0))
    throw std::invalid_argument("evolve_linearized_euler: tol must be positive");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("evolve_linearized_euler: times must be strictly increasing");

  LinearTrajectory traj;
  traj.k = k;
  VectorXcd y = w0.coeffs();
  double t = 0.0;
  Dopri5 stepper{k, {}};
  for (double target : t_grid) {
    if (target < 0.0)
      throw std::invalid_argument("evolve_linearized_euler: negative time");
    if (target > t) stepper.advance(y, t, target, tol);
    traj.times.push_back(target);
    traj.states.push_back(y);
    traj.star_norms.push_back(star_norm(ModeFunction(k, y)));
  }
  return traj;
}

ModeFunction linear_euler_preset(const std::string& name, double k, int max_mode) {
  ModeFunction w(k, max_mode);
  const int M = max_mode;
  if (name == "critical_pair") {
    // smooth complex data concentrated near both critical points of cos y;
    // the slow spectral spreading keeps long runs resolved
    for (int n = -M; n <= M; ++n) {
      const double cpi = (n % 2 == 0) ? 1.0 : -1.0;
      cxd v = std::exp(-sq(n / 6.0)) * cxd(1.0, 0.5) +
              0.2 * std::exp(-sq((n - 3) / 4.0)) +
              0.8 * std::exp(-sq(n / 6.0)) * cpi +
              cxd(0.0, 0.15) * std::exp(-sq((n + 2) / 5.0)) * cpi;
      w.at(n) = v;
    }
  } else if (name == "gauss") {
    for (int n = -M; n <= M; ++n)
      w.at(n) = std::exp(-sq(n / 6.0)) * cxd(1.0, 0.5) + 0.2 * std::exp(-sq((n - 3) / 4.0));
  } else if (name == "mode1") {
    w.at(1) = 0.5;
    w.at(-1) = 0.5;
  } else {
    throw std::invalid_argument("linear_euler_preset: unknown preset '" + name + "'");
  }
  const double nrm = l2_norm(w);
  w.coeffs() /= nrm;
  return w;
}

RateReport measure_rates(const LinearTrajectory& traj, double t_lo, double t_hi) {
  const double k = traj.k;
  const int M = traj.max_mode();
  const double t_end = traj.times.back();
  if (t_lo < 0.0) t_lo = std::max(10.0, 2.0 * k * k);
  if (t_hi < 0.0) t_hi = t_end;
  if (t_end < 10.0 * t_lo * 0.999)
    throw std::invalid_argument("measure_rates: trajectory must span a decade past the window start");

  RateReport rep;
  const int P = 2 * M + 2;
  VectorXd grid(P);
  for (int j = 0; j < P; ++j) grid[j] = 2.0 * pi * j / P;

  const double star0 = traj.star_norms.front();
  const double l20 = traj.states.front().norm();
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    ModeFunction w = traj.state(i);
    ModeFunction psi = laplacian_inverse_k(w);

    VectorXcd psig = psi.to_grid(P);
    double sup_psi = 0.0;
    for (int j = 0; j < P; ++j) sup_psi = std::max(sup_psi, std::abs(psig[j]));

    // profile e^{i k t cos y} applied pointwise, then spectral d_y
    VectorXcd prof(P);
    for (int j = 0; j < P; ++j) prof[j] = std::polar(1.0, k * t * std::cos(grid[j])) * psig[j];
    ModeFunction profm = ModeFunction::from_grid(k, prof, M);
    double sup_dprof = 0.0;
    {
      ModeFunction dprof(k, M);
      for (int n = -M; n <= M; ++n) dprof.at(n) = iu * double(n) * profm.at(n);
      VectorXcd dg = dprof.to_grid(P);
      for (int j = 0; j < P; ++j) sup_dprof = std::max(sup_dprof, std::abs(dg[j]));
    }

    VectorXcd wg = w.to_grid(P);
    VectorXcd wprof(P);
    for (int j = 0; j < P; ++j) wprof[j] = std::polar(1.0, k * t * std::cos(grid[j])) * wg[j];
    ModeFunction wprofm = ModeFunction::from_grid(k, wprof, M);

    rep.sup_psi.t.push_back(t);
    rep.sup_psi.v.push_back(sup_psi);
    rep.omega_at_y1.t.push_back(t);
    rep.omega_at_y1.v.push_back(std::abs(w.evaluate(0.0)));
    rep.omega_at_y2.t.push_back(t);
    rep.omega_at_y2.v.push_back(std::abs(w.evaluate(pi)));
    rep.dyprofile_psi.t.push_back(t);
    rep.dyprofile_psi.v.push_back(sup_dprof);
    rep.h2_profile.t.push_back(t);
    rep.h2_profile.v.push_back(sobolev_norm(wprofm, 2.0));
    rep.l2.t.push_back(t);
    rep.l2.v.push_back(w.coeffs().norm());
    rep.star.t.push_back(t);
    rep.star.v.push_back(traj.star_norms[i]);

    rep.star_drift = std::max(rep.star_drift, std::abs(traj.star_norms[i] - star0) / star0);
    rep.l2_ratio_min = std::min(rep.l2_ratio_min, w.coeffs().norm() / l20);
    rep.l2_ratio_max = std::max(rep.l2_ratio_max, w.coeffs().norm() / l20);
  }

  rep.fits["sup_psi"] = fit_power_law(rep.sup_psi, t_lo, t_hi);
  rep.fits["omega_at_y1"] = fit_power_law(rep.omega_at_y1, t_lo, t_hi);
  rep.fits["omega_at_y2"] = fit_power_law(rep.omega_at_y2, t_lo, t_hi);
  rep.fits["dyprofile_psi"] = fit_power_law(rep.dyprofile_psi, t_lo, t_hi);
  rep.fits["h2_profile"] = fit_power_law(rep.h2_profile, t_lo, t_hi);
  return rep;
}

Omega1Residual omega1_residual(const ModeFunction& w0, double t, double dt, double tol) {
  const double k = w0.k();
  if (t - 2.0 * dt <= 0.0)
    throw std::invalid_argument("omega1_residual: need an interior time point, t > 2 dt");

  const std::vector<double> stencil = {t - 2 * dt, t - dt, t, t + dt, t + 2 * dt};
  LinearTrajectory traj = evolve_linearized_euler(w0, stencil, tol);

  std::vector<VectorXcd> om1(5);
  for (int i = 0; i < 5; ++i)
    om1[i] = apply_omega1_band(k, stencil[i], traj.states[i]);

  VectorXcd dt_om1 =
      (om1[0] - 8.0 * om1[1] + 8.0 * om1[3] - om1[4]) / (12.0 * dt);
  VectorXcd b_om1(om1[2].size());
  apply_B_band(k, om1[2], b_om1);
  const VectorXcd forcing =
      4.0 * t * std::pow(k, 4) * apply_lambda3_band(k, traj.states[2]);
  const VectorXcd resid = dt_om1 + iu * k * b_om1 + forcing;

  Omega1Residual out;
  out.absolute = resid.norm();
  const double denom = forcing.norm();
  if (denom < 1e-14 * std::max(1.0, om1[2].norm())) {
    out.denominator_small = true;
    out.relative = out.absolute;
  } else {
    out.relative = out.absolute / denom;
  }
  return out;
}

}  // namespace kolmflow
