#pragma once

#include "kolmflow/common.hpp"

namespace kolmflow {

// Truncated matrix over y-Fourier indices n in [-N, N] at fixed x-wavenumber k.
// Row/column i maps to n = i - N. Products of band matrices are exact away
// from the truncation edge, so identity checks compare interior blocks only.
struct OperatorMatrix {
  double k = 0.0;
  int N = 0;
  int margin = 8;
  MatrixXcd m;

  int dim() const { return 2 * N + 1; }
  cxd& at(int r, int c) { return m(r + N, c + N); }
  const cxd& at(int r, int c) const { return m(r + N, c + N); }

  VectorXcd apply(const VectorXcd& v) const { return m * v; }
  OperatorMatrix cropped(int N_inner) const;
};

OperatorMatrix op_zero(double k, int N);
OperatorMatrix op_identity(double k, int N);
OperatorMatrix op_diag(double k, int N, const std::function<cxd(int)>& symbol);

// diagonal -( (n+s)^2 + k^2 ); the optional inverse rejects singular symbols
OperatorMatrix build_delta_shift(double k, int s, int N);
OperatorMatrix build_delta_shift_inverse(double k, int s, int N);
OperatorMatrix build_delta_k(double k, int N);

// diagonal (n^2+k^2)^s, the fractional power (-Delta_k)^s
OperatorMatrix build_neg_delta_pow(double k, double s, int N);

OperatorMatrix build_mult_sin(double k, int N);  // mode shifts (e^{iy}-e^{-iy})/(2i)
OperatorMatrix build_mult_cos(double k, int N);
OperatorMatrix build_dy(double k, int N);

OperatorMatrix build_A(double k, int N);  // sin y (1 + Delta_k^{-1}); needs |k| > 1
OperatorMatrix build_B(double k, int N);  // cos y (1 + Delta_k^{-1})

// j = 1: [Delta_k, B]; j = 2: [Lambda_1, B]; j = 3: (1-Delta_k^{-1}) Delta_{k,-1}^{-1} Delta_{k,1}^{-1}
OperatorMatrix build_lambda(int j, double k, int N);

// Delta_k + i k t Lambda_1 - k^2 t^2 (1 - B^2), physical-time convention
OperatorMatrix build_omega1_operator(double k, double t, int N);

// max |a - b| over the interior block |row|,|col| <= N - margin
double interior_max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b, int margin);
double interior_max_abs(const OperatorMatrix& a, int margin);

// star-inner-product weight diag(1 - 1/(n^2+k^2))
OperatorMatrix star_weight(double k, int N);

// --- band applications (O(N), used by the time integrator) ------------------

void apply_B_band(double k, const VectorXcd& in, VectorXcd& out);
void apply_A_band(double k, const VectorXcd& in, VectorXcd& out);
VectorXcd apply_lambda1_band(double k, const VectorXcd& v);      // -2 A d_y - B
VectorXcd apply_one_minus_B2_band(double k, const VectorXcd& v);
VectorXcd apply_lambda3_band(double k, const VectorXcd& v);      // diagonal
VectorXcd apply_omega1_band(double k, double t, const VectorXcd& v);

}  // namespace kolmflow
