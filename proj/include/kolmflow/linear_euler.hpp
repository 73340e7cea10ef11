#pragma once

#include <map>

#include "kolmflow/harness.hpp"
#include "kolmflow/spectral.hpp"

namespace kolmflow {

// States of one x-mode under d/dt omega = -i k B omega, sampled on a time grid.
struct LinearTrajectory {
  double k = 0.0;
  std::vector<double> times;
  std::vector<VectorXcd> states;
  std::vector<double> star_norms;  // conserved by the flow; drift gauges the integrator

  int max_mode() const { return (static_cast<int>(states.at(0).size()) - 1) / 2; }
  ModeFunction state(size_t i) const { return ModeFunction(k, states.at(i)); }
};

// Adaptive Dormand-Prince 5(4); local error controlled by tol, initial step
// tied to the oscillation scale 1/|k|.
LinearTrajectory evolve_linearized_euler(const ModeFunction& w0,
                                         const std::vector<double>& t_grid, double tol);

// named initial-data presets used by the CLI and the tests
ModeFunction linear_euler_preset(const std::string& name, double k, int max_mode);

struct RateReport {
  Series sup_psi, omega_at_y1, omega_at_y2, dyprofile_psi, h2_profile, l2, star;
  std::map<std::string, RateFit> fits;
  double star_drift = 0.0;
  double l2_ratio_min = 1.0, l2_ratio_max = 1.0;
};

// power-law fits on [t_lo, t_hi]; default window [max(10, 2 k^2), t_end]
RateReport measure_rates(const LinearTrajectory& traj, double t_lo = -1.0,
                         double t_hi = -1.0);

struct Omega1Residual {
  double relative = 0.0;
  double absolute = 0.0;
  bool denominator_small = false;
};

// residual of (d_t + i k B) omega_1 = -4 t k^4 Lambda_3 omega at time t,
// with a 5-point stencil of width dt
Omega1Residual omega1_residual(const ModeFunction& w0, double t, double dt,
                               double tol = 1e-12);

}  // namespace kolmflow
