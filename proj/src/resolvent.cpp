#include "kolmflow/resolvent.hpp"

#include <cmath>

#include <Eigen/LU>

namespace kolmflow {

namespace {

MatrixXcd convolution_matrix(const ShearProfile& profile, int M) {
  // V as a two-sided exponential series from grid samples; the profile is a
  // short trigonometric polynomial so a 4M grid is exact
  const int P = std::max(64, 4 * M);
  VectorXcd vals(P);
  for (int j = 0; j < P; ++j) vals[j] = profile.V(2.0 * pi * j / P);
  ModeFunction vm = ModeFunction::from_grid(0.0, vals, std::min(M, P / 2 - 1));
  MatrixXcd C = MatrixXcd::Zero(2 * M + 1, 2 * M + 1);
  const int Mv = vm.max_mode();
  for (int n = -M; n <= M; ++n)
    for (int m = -Mv; m <= Mv; ++m) {
      const int src = n - m;
      if (src < -M || src > M) continue;
      C(n + M, src + M) += vm.at(m);
    }
  return C;
}

MatrixXcd rayleigh_matrix(double k, double lambda, double eps, const ShearProfile& profile,
                          int M) {
  const int d = 2 * M + 1;
  MatrixXcd A = convolution_matrix(profile, M);
  for (int c = -M; c <= M; ++c)
    A.col(c + M) *= 1.0 - 1.0 / (double(c) * c + k * k);
  A -= cxd(lambda, eps) * MatrixXcd::Identity(d, d);
  return A;
}

MatrixXcd ns_matrix(double nu, double k, double lambda, const ShearProfile& profile, int M) {
  const int d = 2 * M + 1;
  MatrixXcd A = convolution_matrix(profile, M);
  for (int c = -M; c <= M; ++c)
    A.col(c + M) *= 1.0 - 1.0 / (double(c) * c + k * k);
  A *= iu * k;
  for (int n = -M; n <= M; ++n) A(n + M, n + M) += nu * (double(n) * n + k * k);
  A -= iu * k * lambda * MatrixXcd::Identity(d, d);
  return A;
}

double condition_estimate(const Eigen::PartialPivLU<MatrixXcd>& lu, const MatrixXcd& A) {
  // inverse-power steps on (A A^H)^{-1} give sigma_min; pair with the inf norm
  const int d = static_cast<int>(A.rows());
  VectorXcd v = VectorXcd::Ones(d);
  for (int i = 0; i < d; ++i) v[i] += 0.01 * std::sin(1.0 + i);
  v.normalize();
  double sigma_min = 1.0;
  for (int it = 0; it < 8; ++it) {
    VectorXcd w = lu.solve(v);
    w = lu.adjoint().solve(w);
    sigma_min = 1.0 / std::sqrt(w.norm());
    v = w.normalized();
  }
  const double norm_inf = A.cwiseAbs().rowwise().sum().maxCoeff();
  return norm_inf / std::max(sigma_min, 1e-300);
}

double energy_identity_residual(double k, double eps, const ModeFunction& F,
                                const ModeFunction& f) {
  const int M = f.max_mode();
  cxd inner = 0.0;
  double quad = 0.0;
  for (int n = -M; n <= M; ++n) {
    const double a = double(n) * n + k * k;
    const cxd w = f.at(n) * (1.0 - 1.0 / a);
    inner += F.at(n) * std::conj(w);
    const cxd phi = -f.at(n) / a;
    quad += std::norm(w) + (a - 1.0) * std::norm(phi);
  }
  const double lhs = std::imag(inner) + eps * quad;
  return std::abs(lhs) / std::max(1e-300, std::abs(eps) * quad);
}

RayleighSolve generic_solve(const MatrixXcd& A, double k, double eps_for_identity,
                            const ModeFunction& F, bool check_energy) {
  const int M = F.max_mode();
  Eigen::PartialPivLU<MatrixXcd> lu(A);
  VectorXcd x = lu.solve(F.coeffs());
  RayleighSolve out;
  out.f = ModeFunction(k, x);
  out.residual = (A * x - F.coeffs()).norm() / std::max(1e-300, F.coeffs().norm());
  out.condition = condition_estimate(lu, A);
  out.flagged = out.condition > 1e14;
  if (check_energy && F.coeffs().norm() > 0)
    out.energy_residual = energy_identity_residual(k, eps_for_identity, F, out.f);
  (void)M;
  return out;
}

}  // namespace

double theta_param(double k, double lambda, const ShearProfile& profile) {
  const double l0 = std::min(std::abs(lambda - profile.vmin()),
                             std::abs(lambda - profile.vmax()));
  return 1.0 + std::abs(k) * std::sqrt(l0) + std::abs(lambda);
}

RayleighSolve solve_rayleigh(double k, double lambda, double eps, const ModeFunction& F,
                             const ShearProfile& profile) {
  if (eps == 0.0) throw std::invalid_argument("solve_rayleigh: eps must be nonzero");
  if (std::abs(k) <= 1.0) throw std::invalid_argument("solve_rayleigh: requires |k| > 1");
  const MatrixXcd A = rayleigh_matrix(k, lambda, eps, profile, F.max_mode());
  return generic_solve(A, k, eps, F, true);
}

RayleighSolve solve_ns_resolvent(double nu, double k, double lambda, const ModeFunction& F,
                                 const ShearProfile& profile) {
  if (!(nu > 0.0 && nu < 1.0 + 1e-12))
    throw std::invalid_argument("solve_ns_resolvent: nu must lie in (0,1]");
  if (std::abs(k) <= 1.0) throw std::invalid_argument("solve_ns_resolvent: requires |k| > 1");
  const MatrixXcd A = ns_matrix(nu, k, lambda, profile, F.max_mode());
  return generic_solve(A, k, 0.0, F, false);
}

namespace {

// largest singular value of [weights] * A^{-1} * diag(rhs_inv), where the output
// weight combines diagonal rows and an optional |V'|^{1/2} grid row
struct WeightedNormProblem {
  const Eigen::PartialPivLU<MatrixXcd>* lu;
  VectorXd rhs_inv;                  // applied to the unit-norm input
  std::vector<VectorXd> diag_rows;   // coefficient-space weights, summed in quadrature
  double grid_row_scale = 0.0;       // prefactor of |V'|^{1/2}(d_y,k)Delta^{-1}
  const MatrixXcd* synth = nullptr;  // synthesis to the weight grid
  VectorXd grid_weight;              // |V'(y_j)|
  VectorXd h_minus1;                 // (d_y,k)Delta^{-1} symbol a^{-1/2}

  double sigma_max(int iters = 60) const {
    const int d = static_cast<int>(rhs_inv.size());
    VectorXcd u(d);
    for (int i = 0; i < d; ++i) u[i] = 1.0 + 0.01 * std::sin(1.0 + i);
    u.normalize();
    double lam = 0.0, lam_prev = -1.0;
    for (int it = 0; it < iters; ++it) {
      VectorXcd v = rhs_inv.asDiagonal() * u;
      VectorXcd f = lu->solve(v);
      // z = (sum of weight forms) applied to f
      VectorXcd z = VectorXcd::Zero(d);
      for (const VectorXd& w : diag_rows)
        z += (w.array().square() * f.array()).matrix();
      if (grid_row_scale != 0.0) {
        VectorXcd g = h_minus1.asDiagonal() * f;
        VectorXcd gv = (*synth) * g;
        const double P = static_cast<double>(synth->rows());
        VectorXcd wg = (grid_weight.array() * gv.array()).matrix();
        z += sq(grid_row_scale) * (h_minus1.asDiagonal() * (synth->adjoint() * wg)) / P;
      }
      VectorXcd p = lu->adjoint().solve(z);
      VectorXcd next = rhs_inv.asDiagonal() * p;
      lam = std::real(u.dot(next));  // u^H (T^H T) u
      const double nn = next.norm();
      if (nn == 0.0) return 0.0;
      u = next / nn;
      if (it > 4 && std::abs(lam - lam_prev) < 1e-7 * std::abs(lam)) break;
      lam_prev = lam;
    }
    return std::sqrt(std::max(0.0, lam));
  }
};

MatrixXcd synthesis_matrix(int M, int P) {
  MatrixXcd S(P, 2 * M + 1);
  for (int j = 0; j < P; ++j)
    for (int n = -M; n <= M; ++n)
      S(j, n + M) = std::polar(1.0, n * 2.0 * pi * j / P);
  return S;
}

}  // namespace

std::vector<ResolventProbe> rayleigh_constant_sweep(const std::vector<double>& k_set,
                                                    const std::vector<double>& lambda_grid,
                                                    const std::vector<double>& eps_list,
                                                    int M, const ShearProfile& profile) {
  std::vector<ResolventProbe> probes;
  const int d = 2 * M + 1;
  ModeFunction probe_rhs(0.0, M);
  for (double k : k_set) {
    VectorXd a(d), a_mhalf(d), a_phalf(d);
    for (int n = -M; n <= M; ++n) {
      a[n + M] = double(n) * n + k * k;
      a_mhalf[n + M] = 1.0 / std::sqrt(a[n + M]);
      a_phalf[n + M] = std::sqrt(a[n + M]);
    }
    for (double eps : eps_list) {
      for (double lambda : lambda_grid) {
        const MatrixXcd A = rayleigh_matrix(k, lambda, eps, profile, M);
        Eigen::PartialPivLU<MatrixXcd> lu(A);
        const double th = theta_param(k, lambda, profile);
        const double l0 = std::min(std::abs(lambda - profile.vmin()),
                                   std::abs(lambda - profile.vmax()));

        WeightedNormProblem p1;
        p1.lu = &lu;
        p1.rhs_inv = a_mhalf;  // F = G^{-1} u with G = diag(a^{1/2})
        p1.diag_rows = {th * a_mhalf};
        WeightedNormProblem p2 = p1;
        p2.diag_rows = {(1.0 + std::abs(k) * std::sqrt(l0)) * a_mhalf};

        ResolventProbe pr;
        pr.k = k;
        pr.lambda = lambda;
        pr.eps_or_nu = eps;
        pr.theta = th;
        pr.ratio1 = p1.sigma_max();
        pr.ratio2 = p2.sigma_max();
        pr.condition = condition_estimate(lu, A);
        // energy identity on a deterministic right-hand side
        ModeFunction F(k, M);
        for (int n = -M; n <= M; ++n)
          F.at(n) = std::exp(-sq(n / 8.0)) * cxd(1.0, 0.3 * std::sin(n + 0.5));
        VectorXcd x = lu.solve(F.coeffs());
        pr.energy_residual = [&] {
          ModeFunction f(k, x);
          return energy_identity_residual(k, eps, F, f);
        }();
        probes.push_back(pr);
      }
    }
  }
  return probes;
}

std::vector<ResolventProbe> ns_constant_sweep(const std::vector<double>& k_set,
                                              const std::vector<double>& lambda_grid,
                                              const std::vector<double>& nu_list,
                                              int M, const ShearProfile& profile) {
  std::vector<ResolventProbe> probes;
  const int d = 2 * M + 1;
  const int P = 2 * d;
  const MatrixXcd S = synthesis_matrix(M, P);
  VectorXd vp_abs(P);
  for (int j = 0; j < P; ++j) vp_abs[j] = std::abs(profile.Vp(2.0 * pi * j / P));

  for (double k : k_set) {
    VectorXd a_mhalf(d), a_phalf(d);
    for (int n = -M; n <= M; ++n) {
      const double a = double(n) * n + k * k;
      a_mhalf[n + M] = 1.0 / std::sqrt(a);
      a_phalf[n + M] = std::sqrt(a);
    }
    for (double nu : nu_list) {
      for (double lambda : lambda_grid) {
        const MatrixXcd A = ns_matrix(nu, k, lambda, profile, M);
        Eigen::PartialPivLU<MatrixXcd> lu(A);
        const double th = theta_param(k, lambda, profile);

        WeightedNormProblem p1;
        p1.lu = &lu;
        p1.rhs_inv = a_mhalf;
        p1.diag_rows = {std::abs(k) * th * a_mhalf};
        p1.grid_row_scale = std::pow(std::abs(k), 1.5);
        p1.synth = &S;
        p1.grid_weight = vp_abs;
        p1.h_minus1 = a_mhalf;

        WeightedNormProblem p2;
        p2.lu = &lu;
        p2.rhs_inv = a_phalf;  // G = diag(a^{-1/2}) => F = diag(a^{1/2}) u
        p2.diag_rows = {std::sqrt(nu * std::abs(k) * th) * a_mhalf};
        p2.grid_row_scale = std::sqrt(nu) * std::abs(k);
        p2.synth = &S;
        p2.grid_weight = vp_abs;
        p2.h_minus1 = a_mhalf;

        ResolventProbe pr;
        pr.k = k;
        pr.lambda = lambda;
        pr.eps_or_nu = nu;
        pr.theta = th;
        pr.ratio1 = p1.sigma_max();
        pr.ratio2 = p2.sigma_max();
        pr.condition = condition_estimate(lu, A);
        probes.push_back(pr);
      }
    }
  }
  return probes;
}

std::map<double, double> sup_ratio_by_slice(const std::vector<ResolventProbe>& probes) {
  std::map<double, double> sup;
  for (const ResolventProbe& p : probes) {
    auto [it, fresh] = sup.try_emplace(p.eps_or_nu, p.ratio1);
    if (!fresh) it->second = std::max(it->second, p.ratio1);
  }
  return sup;
}

}  // namespace kolmflow
