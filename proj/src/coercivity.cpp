#include "kolmflow/coercivity.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace kolmflow {

double delta_s(double s) {
  if (s < 0.0 || s > 0.4)
    throw std::invalid_argument("delta_s: s must lie in [0, 0.4]");
  const double q1_half = (8.0 * s * s + 7.0 * s + 2.0) * s / 2.0;
  const double q0 = 8.0 * s * s + 8.0 * s - 1.0;
  return 4.0 - std::max(q1_half, q0);
}

namespace {
double a_of(long long n, double k) { return double(n) * double(n) + k * k; }

double b_of(long long n, double k, double s) {
  const double am = a_of(n - 1, k), ap = a_of(n + 1, k), an = a_of(n, k);
  return (std::pow(am, 1.0 + s) + std::pow(ap, 1.0 + s)) / 2.0 +
         (-double(n) * double(n) + 0.25) * std::pow(an, s);
}
}  // namespace

SequenceTriple sequence_abc(long long n, double k, double s) {
  if (std::abs(k) <= 1.0)
    throw std::invalid_argument("sequence_abc: requires |k| > 1");
  const double am = a_of(n - 1, k), ap = a_of(n + 1, k), an = a_of(n, k);
  const double wm = 1.0 - 1.0 / am, wp = 1.0 - 1.0 / ap, wn = 1.0 - 1.0 / an;
  const double c =
      -sq(double(n) - 0.5) * wm * std::pow(am, s) * wn -
      sq(double(n) + 0.5) * wp * std::pow(ap, s) * wn +
      (4.0 - (2.0 - 1.0 / am - 1.0 / ap) * wn) * std::pow(an, 1.0 + s) -
      wm * b_of(n - 1, k, s) * wn - wp * b_of(n + 1, k, s) * wn;
  return {n, k, s, an, b_of(n, k, s), c};
}

Lemma9Report check_lemma9(const std::vector<double>& k_set, long long n_max,
                          const std::vector<double>& s_grid) {
  Lemma9Report rep;
  rep.min_slack_b = rep.min_slack_c = std::numeric_limits<double>::infinity();
  for (double s : s_grid) {
    const double ds = delta_s(s);
    for (double k : k_set) {
      for (long long n = -n_max; n <= n_max; ++n) {
        const SequenceTriple t = sequence_abc(n, k, s);
        const double ans = std::pow(t.a, s);
        const double slack_b = t.b - k * k * ans;
        const double slack_c = t.c - ds * ans;
        if (slack_b < rep.min_slack_b) { rep.min_slack_b = slack_b; rep.argmin_b = t; }
        if (slack_c < rep.min_slack_c) { rep.min_slack_c = slack_c; rep.argmin_c = t; }
        ++rep.points;
      }
    }
  }
  return rep;
}

OperatorMatrix build_H0(double k, double s, int N) {
  return op_diag(k, N, [&](int n) { return cxd(b_of(n, k, s)); });
}

OperatorMatrix build_Hstar(double k, double s, int N) {
  return op_diag(k, N, [&](int n) { return cxd(sequence_abc(n, k, s).c); });
}

OperatorMatrix build_H0_operator(double k, double s, int N) {
  // ((-D_{k,-1})^{1+s} + (-D_{k,1})^{1+s})/2 + (d_y^2 + 1/4)(-D_k)^s
  auto an = [&](int n) { return double(n) * n + k * k; };
  return op_diag(k, N, [&](int n) {
    return cxd((std::pow(an(n - 1), 1.0 + s) + std::pow(an(n + 1), 1.0 + s)) / 2.0 +
               (-double(n) * n + 0.25) * std::pow(an(n), s));
  });
}

OperatorMatrix build_Hstar_operator(double k, double s, int N) {
  // assembled with explicit modulation conjugations on a padded range
  const int Np = N + 4;
  const int d = 2 * Np + 1;
  auto an = [&](int n) { return double(n) * n + k * k; };
  auto diag = [&](const std::function<cxd(int)>& f) { return op_diag(k, Np, f).m; };

  MatrixXcd Sp = MatrixXcd::Zero(d, d), Sm = MatrixXcd::Zero(d, d);
  for (int n = -Np; n < Np; ++n) Sp(n + 1 + Np, n + Np) = 1.0;   // e^{iy}
  for (int n = -Np + 1; n <= Np; ++n) Sm(n - 1 + Np, n + Np) = 1.0;  // e^{-iy}

  MatrixXcd H0 = build_H0(k, s, Np).m;
  MatrixXcd Hm1 = Sp * H0 * Sm;  // e^{-i(-1)y} H0 e^{i(-1)y}
  MatrixXcd Hp1 = Sm * H0 * Sp;

  MatrixXcd term1 = diag([&](int n) {
    return cxd(-sq(double(n) - 0.5) * (1.0 - 1.0 / an(n - 1)) * std::pow(an(n - 1), s) *
               (1.0 - 1.0 / an(n)));
  });
  MatrixXcd term2 = diag([&](int n) {
    return cxd(-sq(double(n) + 0.5) * (1.0 - 1.0 / an(n + 1)) * std::pow(an(n + 1), s) *
               (1.0 - 1.0 / an(n)));
  });
  MatrixXcd term3 = diag([&](int n) {
    return cxd((4.0 - (2.0 - 1.0 / an(n - 1) - 1.0 / an(n + 1)) * (1.0 - 1.0 / an(n))) *
               std::pow(an(n), 1.0 + s));
  });
  MatrixXcd wkm1 = diag([&](int n) { return cxd(1.0 - 1.0 / an(n - 1)); });
  MatrixXcd wkp1 = diag([&](int n) { return cxd(1.0 - 1.0 / an(n + 1)); });
  MatrixXcd wk = diag([&](int n) { return cxd(1.0 - 1.0 / an(n)); });

  OperatorMatrix out{k, Np, 8, {}};
  out.m = term1 + term2 + term3 - wkm1 * Hm1 * wk - wkp1 * Hp1 * wk;
  return out.cropped(N);
}

namespace {

// Entrywise Lemma-8 residual through the band calculus in extended precision.
// Both sides couple |m - n| in {0, 2} only:
//   Lambda_1[p+1,p] = -(2p+1) w_p / 2,  Lambda_1[p-1,p] = (2p-1) w_p / 2,
//   B[p+-1,p] = w_p / 2,  A[p+1,p] = -i w_p / 2,  A[p-1,p] = i w_p / 2.
double lemma8_band_residual(double k, double s, int N) {
  auto a = [&](long long n) -> long double {
    return (long double)(n) * n + (long double)(k) * k;
  };
  auto w = [&](long long n) { return 1.0L - 1.0L / a(n); };
  auto as = [&](long long n, long double p) { return powl(a(n), p); };
  auto b = [&](long long n) {
    return (as(n - 1, 1 + (long double)s) + as(n + 1, 1 + (long double)s)) / 2 +
           (0.25L - (long double)(n) * n) * as(n, s);
  };
  auto c = [&](long long n) {
    const long double wm = w(n - 1), wp = w(n + 1), wn = w(n);
    return -(n - 0.5L) * (n - 0.5L) * wm * as(n - 1, s) * wn -
           (n + 0.5L) * (n + 0.5L) * wp * as(n + 1, s) * wn +
           (4.0L - (2.0L - 1.0L / a(n - 1) - 1.0L / a(n + 1)) * wn) * as(n, 1 + (long double)s) -
           wm * b(n - 1) * wn - wp * b(n + 1) * wn;
  };
  long double resid = 0.0L;
  for (long long n = -N; n <= N; ++n) {
    const long double wn = w(n), wm = w(n - 1), wp = w(n + 1);
    // diagonal band
    const long double lhs0 =
        -(2 * n - 1) * (2 * n - 1) * wm * wn * as(n - 1, s) / 4 -
        (2 * n + 1) * (2 * n + 1) * wp * wn * as(n + 1, s) / 4 +
        (4.0L - wn * (wm + wp)) * as(n, 1 + (long double)s);
    const long double rhs0 = wn * (wp * b(n + 1) + wm * b(n - 1)) + c(n);
    resid = std::max(resid, (long double)fabsl(lhs0 - rhs0));
    // superdiagonal band m = n + 2
    const long double lhs2 = (2 * n + 3) * (2 * n + 1) * wp * wn * as(n + 1, s) / 4 -
                             wp * wn * (as(n, 1 + (long double)s) + as(n + 2, 1 + (long double)s)) / 2;
    const long double rhs2 = -wp * wn * b(n + 1);
    resid = std::max(resid, (long double)fabsl(lhs2 - rhs2));
  }
  return static_cast<double>(resid);
}

}  // namespace

CoerciveCheck coercive_matrix_check(double k, double s, int N, int margin) {
  if (std::abs(k) <= 1.0 || s < 0.0 || s > 0.4 || N < 64)
    throw std::invalid_argument("coercive_matrix_check: need |k| > 1, s in [0,0.4], N >= 64");
  const int Np = N + margin;
  const int dp = 2 * Np + 1;

  const MatrixXcd L1 = build_lambda(1, k, Np).m;
  const MatrixXcd A = build_A(k, Np).m;
  const MatrixXcd B = build_B(k, Np).m;
  const MatrixXcd Ds = build_neg_delta_pow(k, s, Np).m;
  const MatrixXcd D1s = build_neg_delta_pow(k, 1.0 + s, Np).m;
  const MatrixXcd one_minus_B2 = MatrixXcd::Identity(dp, dp) - B * B;

  const MatrixXcd lhs = L1 * Ds * L1 + 2.0 * one_minus_B2 * D1s + 2.0 * D1s * one_minus_B2;

  CoerciveCheck out;
  out.lemma8_residual = lemma8_band_residual(k, s, N);

  OperatorMatrix M_p{k, Np, margin,
                     lhs - 4.0 * k * k * A * Ds * A - delta_s(s) * Ds};
  const MatrixXcd M = M_p.cropped(N).m;
  const MatrixXcd W = star_weight(k, N).m;
  const MatrixXcd WM = W * M;
  out.hermiticity_defect = (WM - WM.adjoint()).cwiseAbs().maxCoeff();
  const double scale = WM.cwiseAbs().maxCoeff();
  if (out.hermiticity_defect > 1e-6 * std::max(1.0, scale))
    throw std::runtime_error("coercive_matrix_check: symmetrized form is not Hermitian (assembly bug)");

  MatrixXcd H = 0.5 * (WM + WM.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  out.min_eig = es.eigenvalues().minCoeff();

  out.h_symbol_mismatch = std::max(
      (build_H0_operator(k, s, N).m - build_H0(k, s, N).m).cwiseAbs().maxCoeff(),
      (build_Hstar_operator(k, s, N).m - build_Hstar(k, s, N).m).cwiseAbs().maxCoeff());
  return out;
}

}  // namespace kolmflow
