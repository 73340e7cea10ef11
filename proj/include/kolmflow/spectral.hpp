#pragma once

#include <map>
#include <optional>

#include "kolmflow/common.hpp"

namespace kolmflow {

// Rectangular torus T_p x T_{2pi} with p = 2*pi*kappa, kappa in (0,1).
// The base x-wavenumber alpha = 2*pi/p = 1/kappa is strictly larger than 1,
// so every nonzero x-mode k = alpha*j satisfies |k| > 1.
struct TorusGrid {
  double kappa;
  int Nx, Ny;
  double dealias_fraction;

  TorusGrid(double kappa_, int Nx_, int Ny_, double dealias = 2.0 / 3.0);

  double period_x() const { return 2.0 * pi * kappa; }
  double alpha() const { return 1.0 / kappa; }
  double x(int i) const { return period_x() * i / Nx; }
  double y(int j) const { return 2.0 * pi * j / Ny; }
};

// One x-wavenumber slice: complex Fourier coefficients in y, |n| <= M.
class ModeFunction {
 public:
  ModeFunction() : k_(0.0) {}
  ModeFunction(double k, int max_mode)
      : k_(k), c_(VectorXcd::Zero(2 * max_mode + 1)) {}
  ModeFunction(double k, VectorXcd coeffs);

  double k() const { return k_; }
  int max_mode() const { return (static_cast<int>(c_.size()) - 1) / 2; }
  int size() const { return static_cast<int>(c_.size()); }

  cxd& at(int n) { return c_[n + max_mode()]; }
  const cxd& at(int n) const { return c_[n + max_mode()]; }
  const VectorXcd& coeffs() const { return c_; }
  VectorXcd& coeffs() { return c_; }

  // values at P uniform grid points y_j = 2*pi*j/P
  VectorXcd to_grid(int P) const;
  // exact trigonometric interpolation at arbitrary points
  VectorXcd evaluate(const VectorXd& pts) const;
  cxd evaluate(double y) const;

  static ModeFunction from_grid(double k, const VectorXcd& values, int max_mode);

  ModeFunction truncated(int max_mode) const;

 private:
  double k_;
  VectorXcd c_;
};

// Real scalar field on the torus, stored as x-modes k = alpha*j.
// Reality means modes at -j carry the conjugate-mirrored coefficients.
class Field2D {
 public:
  explicit Field2D(const TorusGrid& grid) : grid_(grid) {}

  const TorusGrid& grid() const { return grid_; }
  std::map<int, ModeFunction>& modes() { return modes_; }
  const std::map<int, ModeFunction>& modes() const { return modes_; }

  void set_mode(int j, ModeFunction m);
  const ModeFunction* mode(int j) const;

  double l2_norm() const;
  cxd mean() const;
  bool check_reality(double tol) const;
  void enforce_reality();

  static Field2D from_grid(const TorusGrid& grid, const MatrixXd& values);
  MatrixXd to_grid() const;

 private:
  TorusGrid grid_;
  std::map<int, ModeFunction> modes_;
};

// Background shear V(y) with derivative evaluators and Morse bookkeeping.
// Construction locates the two critical points (near 0 and pi) or throws.
class ShearProfile {
 public:
  // cosc[m], sinc[m]: coefficients of cos(m y), sin(m y); sinc[0] ignored.
  ShearProfile(VectorXd cosc, VectorXd sinc);

  static ShearProfile cosine();  // V = cos y
  static ShearProfile from_mode(const ModeFunction& v_of_y);

  double V(double y) const { return eval(y, 0); }
  double Vp(double y) const { return eval(y, 1); }
  double Vpp(double y) const { return eval(y, 2); }
  double Vppp(double y) const { return eval(y, 3); }

  double y1() const { return y1_; }
  double y2() const { return y2_; }
  double vmax() const { return vmax_; }
  double vmin() const { return vmin_; }

 private:
  double eval(double y, int deriv) const;
  void locate_critical_points();

  VectorXd cosc_, sinc_;
  double y1_ = 0.0, y2_ = pi, vmax_ = 1.0, vmin_ = -1.0;
};

// --- operations -------------------------------------------------------------

// psi with Delta_k psi = g; for k = 0 requires g-hat(0) = 0.
ModeFunction laplacian_inverse_k(const ModeFunction& g);

// (sum_n (n^2+k^2)^s |g-hat(n)|^2)^{1/2}
double sobolev_norm(const ModeFunction& g, double s);

double l2_norm(const ModeFunction& g);

ModeFunction project_zero(const Field2D& f);
Field2D project_nonzero(const Field2D& f);

// <f,g>_* = sum_n f-hat(n) conj(g-hat(n)) (1 - 1/(n^2+k^2)); needs |k| > 1.
cxd star_inner(const ModeFunction& f, const ModeFunction& g);
double star_norm(const ModeFunction& f);

// dense (2M+1)^2 differentiation and Laplacian matrices, test oracles mainly
MatrixXcd diff_matrix(int max_mode);
MatrixXcd laplacian_matrix(double k, int max_mode);

}  // namespace kolmflow
