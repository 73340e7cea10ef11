#pragma once

#include <cstdint>

#include "kolmflow/harness.hpp"
#include "kolmflow/spectral.hpp"

namespace kolmflow {

// Pseudo-spectral 2D Navier-Stokes in vorticity form near Kolmogorov flow.
// Dealiased divergence-form advection, exact integrating factor for nu*Delta,
// classical RK4 on the advective part.
struct SimConfig {
  double kappa = 0.5;
  int Nx = 256, Ny = 256;
  double dealias_fraction = 2.0 / 3.0;
  double nu = 2e-3;
  double t_end = 10.0;
  double cfl = 0.4;
  double dt_max = 5e-3;
  double fixed_dt = 0.0;  // > 0 disables the CFL controller
  std::string pattern = "mode21";
  double amplitude_multiplier = 1e-3;  // perturbation amplitude in units of nu^{1/3}
  std::uint64_t seed = 0;
  int output_stride = 10;

  void validate() const;
  json to_json() const;
  static SimConfig from_json(const json& j);
};

struct DnsSeries {
  Series omega_neq, u_neq, shear_dev, depletion_0, depletion_pi;
  double xi_linf_l2 = 0.0;       // L^inf_t L^2 of the nonzero modes
  double xi_visc = 0.0;          // nu^{1/2} || grad f ||_{L^2 L^2}
  double xi_halfdx = 0.0;        // || |Dx|^{1/2} grad inv-lap f ||_{L^2 L^2}
  double xi_weighted = 0.0;      // || |V'|^{1/2} d_x grad inv-lap f ||_{L^2 L^2}
  bool aborted = false;
  double abort_time = 0.0;
  long long steps = 0;
};

class DnsSolver {
 public:
  explicit DnsSolver(const SimConfig& cfg);
  ~DnsSolver();
  DnsSolver(const DnsSolver&) = delete;
  DnsSolver& operator=(const DnsSolver&) = delete;

  void initialize();                       // sin y + amplitude * pattern
  void set_state(const Field2D& omega);    // arbitrary initial vorticity
  Field2D state() const;
  double time() const { return t_; }

  void step(double dt);
  DnsSeries run();                        // advances to t_end with diagnostics

  // diagnostics on the current state
  double omega_neq_l2() const;
  double u_neq_l2() const;
  double energy() const;     // ||U||^2 / 2
  double enstrophy() const;  // ||Omega||^2 / 2
  double shear_deviation_l2() const;
  ModeFunction shear_profile_mode() const;  // P_0 U^x as a y-mode
  cxd first_mode_at(double y) const;        // omega at x-mode alpha, height y
  // instantaneous spacetime-norm integrands for the nonzero modes
  void xi_rates(double& visc, double& halfdx, double& weighted);
  double suggest_dt() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double t_ = 0.0;
};

// uniform-H^3 perturbation patterns; returns spectral field of unit H^3 norm
Field2D perturbation_pattern(const TorusGrid& grid, const std::string& name,
                             std::uint64_t seed);

DnsSeries run_experiment(const SimConfig& cfg);

enum class ScanOutcome { kReturnsToShear, kNotDecayed, kInconclusive };

struct ScanRow {
  double nu = 0.0, multiplier = 0.0;
  ScanOutcome outcome = ScanOutcome::kInconclusive;
  double final_ratio = 0.0;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::map<double, double> transition_multiplier;  // geometric midpoint per nu
};

ScanResult threshold_scan(const std::vector<double>& nu_list,
                          const std::vector<double>& multiplier_list,
                          const std::string& pattern, SimConfig base);

// exponential fit of ||Omega_neq|| on [nu^{-1/2}, min(t_end, nu^{-1})],
// guarded against the numerical floor
RateFit enhanced_dissipation_fit(const Series& omega_neq, double nu);

const char* scan_outcome_name(ScanOutcome o);

}  // namespace kolmflow
