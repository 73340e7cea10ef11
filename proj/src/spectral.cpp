#include "kolmflow/spectral.hpp"

#include <cmath>

namespace kolmflow {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

std::vector<double> geomspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  const double r = std::log(hi / lo);
  for (int i = 0; i < n; ++i) v[i] = lo * std::exp(r * i / (n - 1));
  return v;
}

TorusGrid::TorusGrid(double kappa_, int Nx_, int Ny_, double dealias)
    : kappa(kappa_), Nx(Nx_), Ny(Ny_), dealias_fraction(dealias) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::invalid_argument("TorusGrid: kappa must lie in (0,1)");
  if (Nx < 8 || Ny < 8 || Nx % 2 || Ny % 2)
    throw std::invalid_argument("TorusGrid: Nx, Ny must be even and >= 8");
  if (!(dealias > 0.0 && dealias <= 1.0))
    throw std::invalid_argument("TorusGrid: dealias_fraction must lie in (0,1]");
}

ModeFunction::ModeFunction(double k, VectorXcd coeffs) : k_(k), c_(std::move(coeffs)) {
  if (c_.size() % 2 == 0)
    throw std::invalid_argument("ModeFunction: coefficient count must be odd");
}

VectorXcd ModeFunction::to_grid(int P) const {
  VectorXcd out = VectorXcd::Zero(P);
  const int M = max_mode();
  for (int j = 0; j < P; ++j) {
    const double y = 2.0 * pi * j / P;
    cxd s = 0.0;
    for (int n = -M; n <= M; ++n) s += at(n) * std::polar(1.0, n * y);
    out[j] = s;
  }
  return out;
}

VectorXcd ModeFunction::evaluate(const VectorXd& pts) const {
  VectorXcd out(pts.size());
  for (Eigen::Index j = 0; j < pts.size(); ++j) out[j] = evaluate(pts[j]);
  return out;
}

cxd ModeFunction::evaluate(double y) const {
  const int M = max_mode();
  // Horner in e^{iy} over n = -M..M
  const cxd e = std::polar(1.0, y);
  cxd s = 0.0;
  for (int n = M; n >= -M; --n) s = s * e + at(n);
  return s * std::polar(1.0, -M * y);
}

ModeFunction ModeFunction::from_grid(double k, const VectorXcd& values, int max_mode) {
  const int P = static_cast<int>(values.size());
  if (P < 2 * max_mode + 1)
    throw std::invalid_argument("ModeFunction::from_grid: grid too coarse for requested modes");
  ModeFunction m(k, max_mode);
  for (int n = -max_mode; n <= max_mode; ++n) {
    cxd s = 0.0;
    for (int j = 0; j < P; ++j) s += values[j] * std::polar(1.0, -n * 2.0 * pi * j / P);
    m.at(n) = s / double(P);
  }
  return m;
}

ModeFunction ModeFunction::truncated(int M) const {
  ModeFunction out(k_, M);
  const int M0 = max_mode();
  for (int n = -std::min(M, M0); n <= std::min(M, M0); ++n) out.at(n) = at(n);
  return out;
}

void Field2D::set_mode(int j, ModeFunction m) { modes_.insert_or_assign(j, std::move(m)); }

const ModeFunction* Field2D::mode(int j) const {
  auto it = modes_.find(j);
  return it == modes_.end() ? nullptr : &it->second;
}

double Field2D::l2_norm() const {
  double s = 0.0;
  for (const auto& [j, m] : modes_) s += m.coeffs().squaredNorm();
  return std::sqrt(s);
}

cxd Field2D::mean() const {
  const ModeFunction* z = mode(0);
  return z ? z->at(0) : cxd(0.0);
}

bool Field2D::check_reality(double tol) const {
  for (const auto& [j, m] : modes_) {
    const ModeFunction* mm = mode(-j);
    if (!mm) return false;
    const int M = m.max_mode();
    for (int n = -M; n <= M; ++n)
      if (std::abs(mm->at(-n) - std::conj(m.at(n))) > tol) return false;
  }
  return true;
}

void Field2D::enforce_reality() {
  for (auto& [j, m] : modes_) {
    if (j < 0) continue;
    auto it = modes_.find(-j);
    const int M = m.max_mode();
    if (j == 0) {
      for (int n = 0; n <= M; ++n) {
        cxd avg = 0.5 * (m.at(n) + std::conj(m.at(-n)));
        m.at(n) = avg;
        m.at(-n) = std::conj(avg);
      }
      continue;
    }
    if (it == modes_.end()) {
      ModeFunction mirror(-m.k(), M);
      for (int n = -M; n <= M; ++n) mirror.at(-n) = std::conj(m.at(n));
      modes_.insert({-j, std::move(mirror)});
    } else {
      for (int n = -M; n <= M; ++n) {
        cxd avg = 0.5 * (m.at(n) + std::conj(it->second.at(-n)));
        m.at(n) = avg;
        it->second.at(-n) = std::conj(avg);
      }
    }
  }
}

Field2D Field2D::from_grid(const TorusGrid& grid, const MatrixXd& values) {
  if (values.rows() != grid.Nx || values.cols() != grid.Ny)
    throw std::invalid_argument("Field2D::from_grid: shape mismatch");
  Field2D f(grid);
  const int Jmax = grid.Nx / 2 - 1, M = grid.Ny / 2 - 1;
  for (int j = -Jmax; j <= Jmax; ++j) {
    // x-analysis then y-analysis, both plain DFT sums
    VectorXcd slice = VectorXcd::Zero(grid.Ny);
    for (int iy = 0; iy < grid.Ny; ++iy) {
      cxd s = 0.0;
      for (int ix = 0; ix < grid.Nx; ++ix)
        s += values(ix, iy) * std::polar(1.0, -2.0 * pi * j * ix / grid.Nx);
      slice[iy] = s / double(grid.Nx);
    }
    ModeFunction m = ModeFunction::from_grid(grid.alpha() * j, slice, M);
    bool nonzero = m.coeffs().cwiseAbs().maxCoeff() > 0.0;
    if (nonzero || j == 0) f.set_mode(j, std::move(m));
  }
  return f;
}

MatrixXd Field2D::to_grid() const {
  MatrixXd out = MatrixXd::Zero(grid_.Nx, grid_.Ny);
  for (const auto& [j, m] : modes_) {
    VectorXcd prof = m.to_grid(grid_.Ny);
    for (int ix = 0; ix < grid_.Nx; ++ix) {
      const cxd ph = std::polar(1.0, 2.0 * pi * j * ix / grid_.Nx);
      for (int iy = 0; iy < grid_.Ny; ++iy) out(ix, iy) += std::real(ph * prof[iy]);
    }
  }
  return out;
}

ShearProfile::ShearProfile(VectorXd cosc, VectorXd sinc)
    : cosc_(std::move(cosc)), sinc_(std::move(sinc)) {
  if (sinc_.size() != cosc_.size())
    throw std::invalid_argument("ShearProfile: coefficient arrays must match");
  locate_critical_points();
}

ShearProfile ShearProfile::cosine() {
  VectorXd c = VectorXd::Zero(2), s = VectorXd::Zero(2);
  c[1] = 1.0;
  return ShearProfile(c, s);
}

ShearProfile ShearProfile::from_mode(const ModeFunction& v) {
  const int M = v.max_mode();
  VectorXd c = VectorXd::Zero(M + 1), s = VectorXd::Zero(M + 1);
  c[0] = std::real(v.at(0));
  for (int m = 1; m <= M; ++m) {
    c[m] = std::real(v.at(m) + v.at(-m));
    s[m] = std::real(iu * (v.at(m) - v.at(-m)));
  }
  return ShearProfile(c, s);
}

double ShearProfile::eval(double y, int d) const {
  double s = (d == 0) ? cosc_[0] : 0.0;
  for (int m = 1; m < cosc_.size(); ++m) {
    const double p = std::pow(double(m), d);
    const double cy = std::cos(m * y), sy = std::sin(m * y);
    switch (d % 4) {
      case 0: s += p * (cosc_[m] * cy + sinc_[m] * sy); break;
      case 1: s += p * (-cosc_[m] * sy + sinc_[m] * cy); break;
      case 2: s += p * (-cosc_[m] * cy - sinc_[m] * sy); break;
      case 3: s += p * (cosc_[m] * sy - sinc_[m] * cy); break;
    }
  }
  return s;
}

void ShearProfile::locate_critical_points() {
  auto refine = [&](double lo, double hi) {
    // bisection on V' (sign change guaranteed by the window check below)
    double flo = Vp(lo);
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi), fm = Vp(mid);
      if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; } else { hi = mid; }
    }
    return 0.5 * (lo + hi);
  };
  const double w = 0.1;
  if (!(Vp(-w) > 0.0 && Vp(w) < 0.0 && Vp(pi - w) < 0.0 && Vp(pi + w) > 0.0))
    throw std::invalid_argument(
        "ShearProfile: no admissible critical points near 0 and pi (profile too far from cos y)");
  y1_ = refine(-w, w);
  y2_ = refine(pi - w, pi + w);
  // count sign changes of V' cyclically on a staggered grid (avoids sampling
  // a critical point exactly); anything other than two is rejected
  const int G = 4096;
  int changes = 0;
  double prev = Vp(pi / G);
  for (int i = 1; i <= G; ++i) {
    double cur = Vp((2.0 * i + 1.0) * pi / G);
    if ((cur > 0) != (prev > 0)) ++changes;
    prev = cur;
  }
  if (changes != 2)
    throw std::invalid_argument("ShearProfile: profile has more than two critical points");
  vmax_ = V(y1_);
  vmin_ = V(y2_);
}

ModeFunction laplacian_inverse_k(const ModeFunction& g) {
  const double k = g.k();
  const int M = g.max_mode();
  ModeFunction psi(k, M);
  if (k == 0.0 && g.at(0) != 0.0)
    throw std::invalid_argument("laplacian_inverse_k: k = 0 with nonzero mean is not invertible");
  for (int n = -M; n <= M; ++n) {
    if (n == 0 && k == 0.0) { psi.at(0) = 0.0; continue; }
    psi.at(n) = -g.at(n) / (double(n) * n + k * k);
  }
  return psi;
}

double sobolev_norm(const ModeFunction& g, double s) {
  const double k = g.k();
  const int M = g.max_mode();
  double acc = 0.0;
  for (int n = -M; n <= M; ++n)
    acc += std::pow(double(n) * n + k * k, s) * std::norm(g.at(n));
  return std::sqrt(acc);
}

double l2_norm(const ModeFunction& g) { return g.coeffs().norm(); }

ModeFunction project_zero(const Field2D& f) {
  const ModeFunction* z = f.mode(0);
  if (z) return *z;
  return ModeFunction(0.0, f.grid().Ny / 2 - 1);
}

Field2D project_nonzero(const Field2D& f) {
  Field2D out(f.grid());
  for (const auto& [j, m] : f.modes())
    if (j != 0) out.set_mode(j, m);
  return out;
}

cxd star_inner(const ModeFunction& f, const ModeFunction& g) {
  if (f.k() != g.k())
    throw std::invalid_argument("star_inner: wavenumbers differ");
  const double k = f.k();
  if (std::abs(k) <= 1.0)
    throw std::invalid_argument("star_inner: requires |k| > 1");
  const int M = std::min(f.max_mode(), g.max_mode());
  cxd s = 0.0;
  for (int n = -M; n <= M; ++n)
    s += f.at(n) * std::conj(g.at(n)) * (1.0 - 1.0 / (double(n) * n + k * k));
  return s;
}

double star_norm(const ModeFunction& f) {
  return std::sqrt(std::real(star_inner(f, f)));
}

MatrixXcd diff_matrix(int M) {
  MatrixXcd D = MatrixXcd::Zero(2 * M + 1, 2 * M + 1);
  for (int n = -M; n <= M; ++n) D(n + M, n + M) = iu * double(n);
  return D;
}

MatrixXcd laplacian_matrix(double k, int M) {
  MatrixXcd D = MatrixXcd::Zero(2 * M + 1, 2 * M + 1);
  for (int n = -M; n <= M; ++n) D(n + M, n + M) = -(double(n) * n + k * k);
  return D;
}

}  // namespace kolmflow
