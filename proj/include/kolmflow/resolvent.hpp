#pragma once

#include "kolmflow/spectral.hpp"

namespace kolmflow {

// theta(k, lambda) = 1 + |k| lambda_0^{1/2} + |lambda|,
// lambda_0 = min(|lambda - m|, |lambda - M|)
double theta_param(double k, double lambda, const ShearProfile& profile);

struct RayleighSolve {
  ModeFunction f;
  double condition = 0.0;
  bool flagged = false;          // condition above 1e14
  double residual = 0.0;         // of the defining equation, relative to ||F||
  double energy_residual = 0.0;  // imaginary-part identity, relative
};

// V (f + Delta_k^{-1} f) - (lambda + i eps) f = F
RayleighSolve solve_rayleigh(double k, double lambda, double eps, const ModeFunction& F,
                             const ShearProfile& profile);

// -nu Delta_k f + i k V (1 + Delta_k^{-1}) f - i k lambda f = F
RayleighSolve solve_ns_resolvent(double nu, double k, double lambda, const ModeFunction& F,
                                 const ShearProfile& profile);

struct ResolventProbe {
  double k = 0.0, lambda = 0.0, eps_or_nu = 0.0;
  double theta = 0.0;
  double ratio1 = 0.0, ratio2 = 0.0;
  double condition = 0.0;
  double energy_residual = 0.0;
};

// Largest singular values of the weighted solution operators (deterministic
// fixed-start power iteration on the normal operator).
std::vector<ResolventProbe> rayleigh_constant_sweep(const std::vector<double>& k_set,
                                                    const std::vector<double>& lambda_grid,
                                                    const std::vector<double>& eps_list,
                                                    int max_mode,
                                                    const ShearProfile& profile);

std::vector<ResolventProbe> ns_constant_sweep(const std::vector<double>& k_set,
                                              const std::vector<double>& lambda_grid,
                                              const std::vector<double>& nu_list,
                                              int max_mode, const ShearProfile& profile);

// max ratio1 per eps (or nu) slice
std::map<double, double> sup_ratio_by_slice(const std::vector<ResolventProbe>& probes);

}  // namespace kolmflow
