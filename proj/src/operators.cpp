#include "kolmflow/operators.hpp"

#include <cmath>
#include <functional>

namespace kolmflow {

namespace {
double a_sym(double k, double n) { return n * n + k * k; }

void require_k(double k) {
  if (std::abs(k) <= 1.0)
    throw std::invalid_argument("operators: requires |k| > 1");
}
}  // namespace

OperatorMatrix OperatorMatrix::cropped(int N_inner) const {
  if (N_inner > N) throw std::invalid_argument("cropped: inner block larger than matrix");
  OperatorMatrix out{k, N_inner, margin, {}};
  out.m = m.block(N - N_inner, N - N_inner, 2 * N_inner + 1, 2 * N_inner + 1);
  return out;
}

OperatorMatrix op_zero(double k, int N) {
  return {k, N, 8, MatrixXcd::Zero(2 * N + 1, 2 * N + 1)};
}

OperatorMatrix op_identity(double k, int N) {
  return {k, N, 8, MatrixXcd::Identity(2 * N + 1, 2 * N + 1)};
}

OperatorMatrix op_diag(double k, int N, const std::function<cxd(int)>& symbol) {
  OperatorMatrix o = op_zero(k, N);
  for (int n = -N; n <= N; ++n) o.at(n, n) = symbol(n);
  return o;
}

OperatorMatrix build_delta_shift(double k, int s, int N) {
  return op_diag(k, N, [&](int n) { return cxd(-a_sym(k, n + s)); });
}

OperatorMatrix build_delta_shift_inverse(double k, int s, int N) {
  for (int n = -N; n <= N; ++n)
    if (a_sym(k, n + s) == 0.0)
      throw std::invalid_argument("build_delta_shift_inverse: singular symbol at n = " +
                                  std::to_string(n));
  return op_diag(k, N, [&](int n) { return cxd(-1.0 / a_sym(k, n + s)); });
}

OperatorMatrix build_delta_k(double k, int N) { return build_delta_shift(k, 0, N); }

OperatorMatrix build_neg_delta_pow(double k, double s, int N) {
  return op_diag(k, N, [&](int n) { return cxd(std::pow(a_sym(k, n), s)); });
}

OperatorMatrix build_mult_sin(double k, int N) {
  OperatorMatrix o = op_zero(k, N);
  // sin y = (e^{iy} - e^{-iy}) / (2i); e^{iy} maps mode n to n+1
  for (int n = -N; n < N; ++n) o.at(n + 1, n) = cxd(0.0, -0.5);
  for (int n = -N + 1; n <= N; ++n) o.at(n - 1, n) = cxd(0.0, 0.5);
  return o;
}

OperatorMatrix build_mult_cos(double k, int N) {
  OperatorMatrix o = op_zero(k, N);
  for (int n = -N; n < N; ++n) o.at(n + 1, n) = 0.5;
  for (int n = -N + 1; n <= N; ++n) o.at(n - 1, n) = 0.5;
  return o;
}

OperatorMatrix build_dy(double k, int N) {
  return op_diag(k, N, [](int n) { return iu * double(n); });
}

namespace {
OperatorMatrix one_plus_delta_inv(double k, int N) {
  return op_diag(k, N, [&](int n) { return cxd(1.0 - 1.0 / a_sym(k, n)); });
}
}  // namespace

OperatorMatrix build_A(double k, int N) {
  require_k(k);
  OperatorMatrix o = build_mult_sin(k, N);
  o.m = o.m * one_plus_delta_inv(k, N).m;
  return o;
}

OperatorMatrix build_B(double k, int N) {
  require_k(k);
  OperatorMatrix o = build_mult_cos(k, N);
  o.m = o.m * one_plus_delta_inv(k, N).m;
  return o;
}

OperatorMatrix build_lambda(int j, double k, int N) {
  require_k(k);
  switch (j) {
    case 1: {
      OperatorMatrix d = build_delta_k(k, N), b = build_B(k, N);
      OperatorMatrix o = op_zero(k, N);
      o.m = d.m * b.m - b.m * d.m;
      return o;
    }
    case 2: {
      OperatorMatrix l1 = build_lambda(1, k, N), b = build_B(k, N);
      OperatorMatrix o = op_zero(k, N);
      o.m = l1.m * b.m - b.m * l1.m;
      return o;
    }
    case 3:
      return op_diag(k, N, [&](int n) {
        return cxd((1.0 + 1.0 / a_sym(k, n)) / (a_sym(k, n - 1) * a_sym(k, n + 1)));
      });
    default:
      throw std::invalid_argument("build_lambda: j must be 1, 2 or 3");
  }
}

OperatorMatrix build_omega1_operator(double k, double t, int N) {
  if (t < 0.0) throw std::invalid_argument("build_omega1_operator: t >= 0 required");
  OperatorMatrix d = build_delta_k(k, N);
  OperatorMatrix l1 = build_lambda(1, k, N);
  OperatorMatrix b = build_B(k, N);
  OperatorMatrix o = op_zero(k, N);
  MatrixXcd one_minus_b2 = MatrixXcd::Identity(o.dim(), o.dim()) - b.m * b.m;
  o.m = d.m + iu * k * t * l1.m - k * k * t * t * one_minus_b2;
  return o;
}

double interior_max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b, int margin) {
  if (a.N != b.N) throw std::invalid_argument("interior_max_abs_diff: size mismatch");
  const int Ni = a.N - margin;
  if (Ni < 0) throw std::invalid_argument("interior_max_abs_diff: margin exceeds N");
  double mx = 0.0;
  for (int r = -Ni; r <= Ni; ++r)
    for (int c = -Ni; c <= Ni; ++c)
      mx = std::max(mx, std::abs(a.at(r, c) - b.at(r, c)));
  return mx;
}

double interior_max_abs(const OperatorMatrix& a, int margin) {
  OperatorMatrix z = op_zero(a.k, a.N);
  return interior_max_abs_diff(a, z, margin);
}

OperatorMatrix star_weight(double k, int N) {
  return op_diag(k, N, [&](int n) { return cxd(1.0 - 1.0 / a_sym(k, n)); });
}

void apply_B_band(double k, const VectorXcd& in, VectorXcd& out) {
  const int M = (static_cast<int>(in.size()) - 1) / 2;
  out.setZero(in.size());
  for (int i = 0; i < in.size(); ++i) {
    const double n = i - M;
    const cxd w = in[i] * (0.5 * (1.0 - 1.0 / a_sym(k, n)));
    if (i + 1 < in.size()) out[i + 1] += w;
    if (i - 1 >= 0) out[i - 1] += w;
  }
}

void apply_A_band(double k, const VectorXcd& in, VectorXcd& out) {
  const int M = (static_cast<int>(in.size()) - 1) / 2;
  out.setZero(in.size());
  for (int i = 0; i < in.size(); ++i) {
    const double n = i - M;
    const cxd w = in[i] * (1.0 - 1.0 / a_sym(k, n));
    if (i + 1 < in.size()) out[i + 1] += cxd(0.0, -0.5) * w;
    if (i - 1 >= 0) out[i - 1] += cxd(0.0, 0.5) * w;
  }
}

VectorXcd apply_lambda1_band(double k, const VectorXcd& v) {
  const int M = (static_cast<int>(v.size()) - 1) / 2;
  VectorXcd dy(v.size());
  for (int i = 0; i < v.size(); ++i) dy[i] = iu * double(i - M) * v[i];
  VectorXcd adv(v.size()), bv(v.size());
  apply_A_band(k, dy, adv);
  apply_B_band(k, v, bv);
  return -2.0 * adv - bv;
}

VectorXcd apply_one_minus_B2_band(double k, const VectorXcd& v) {
  VectorXcd bv(v.size()), bbv(v.size());
  apply_B_band(k, v, bv);
  apply_B_band(k, bv, bbv);
  return v - bbv;
}

VectorXcd apply_lambda3_band(double k, const VectorXcd& v) {
  const int M = (static_cast<int>(v.size()) - 1) / 2;
  VectorXcd out(v.size());
  for (int i = 0; i < v.size(); ++i) {
    const double n = i - M;
    out[i] = v[i] * (1.0 + 1.0 / a_sym(k, n)) / (a_sym(k, n - 1) * a_sym(k, n + 1));
  }
  return out;
}

VectorXcd apply_omega1_band(double k, double t, const VectorXcd& v) {
  const int M = (static_cast<int>(v.size()) - 1) / 2;
  VectorXcd dv(v.size());
  for (int i = 0; i < v.size(); ++i) dv[i] = -a_sym(k, i - M) * v[i];
  return dv + iu * (k * t) * apply_lambda1_band(k, v) -
         (k * k * t * t) * apply_one_minus_B2_band(k, v);
}

}  // namespace kolmflow
