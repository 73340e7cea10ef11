#pragma once

#include "kolmflow/harness.hpp"
#include "kolmflow/spectral.hpp"

namespace kolmflow {

// Change of variables V(y) = a cos(theta(y)) + d with theta a monotone
// degree-1 circle map. theta - id and its inverse displacement are stored
// spectrally, so evaluation anywhere is exact trigonometric interpolation.
class MorseData {
 public:
  double a = 1.0, d = 0.0;

  double theta(double y) const;
  double theta_inverse(double z) const;
  double residual_sup(const ShearProfile& profile, int sample_factor = 4) const;
  int grid_size() const { return grid_n_; }

  friend MorseData morse_transform(const ShearProfile& profile, int grid_n);

 private:
  int grid_n_ = 0;
  VectorXcd phi_;      // coefficients of theta(y) - y
  VectorXcd phi_inv_;  // coefficients of theta^{-1}(z) - z
};

MorseData morse_transform(const ShearProfile& profile, int grid_n = 256);

// t_* = (1 - e^{-nu t})/nu and gamma_1(t) = int_0^t t_*^2, closed forms with a
// series fallback for small nu t
double t_star(double t, double nu);
double gamma1(double t, double nu);

// smooth cutoff: 1 on |s| <= 1, 0 on |s| >= 2, built from exp(-1/x)
double eta_cutoff(double s);

// Approximate solution: per k in Lambda_* and per time,
//   w_{k,1}(t,y) = wtilde_k(a t_*, theta(y)) e^{-i k d t_*},
//   w_{k,2} = w_{k,1} e^{-nu k^2 gamma_1(t) |V'|^2}.
struct ApproxSolution {
  double nu = 0.0;
  double alpha = 0.0;
  int max_mode = 0;
  std::vector<double> times;
  std::vector<int> kj;                      // x-mode indices j, k = alpha j
  std::map<int, std::vector<VectorXcd>> wk2;  // j -> per-time y-coefficients

  std::vector<int> lambda_star() const { return kj; }
  // pointwise split w_{k,3} = eta(sqrt(t) V') w_{k,2}, w_{k*} = rest
  void split(size_t time_index, const ShearProfile& profile,
             std::map<int, VectorXcd>& wk3, std::map<int, VectorXcd>& wks) const;
};

ApproxSolution build_approx_solution(const Field2D& w0, const ShearProfile& profile,
                                     double nu, const std::vector<double>& t_grid,
                                     double tol = 1e-10);

struct ErrorLedger {
  std::vector<double> t;
  std::vector<double> er_l2;        // || Er_L(t) ||_{L^2}
  std::vector<double> shape_sum;    // nu<t><nu t^3>^{-1} + nu^{1/3}<t>^{-2} + <t>^{-2}|nu t^3|^{1/2}
  std::vector<double> sup_dx_omega; // sup |d_x omega_L|
  std::vector<double> sup_uLy;      // sup |u_L^y|
  double envelope_constant = 0.0;   // max er_l2 / (shape_sum * ||w0||_{H^3})
  double h3_norm = 0.0;
};

ErrorLedger error_ledger(const ApproxSolution& sol, const Field2D& w0,
                         const ShearProfile& profile);

}  // namespace kolmflow
