#include "kolmflow/green.hpp"

#include <cmath>

namespace kolmflow {

namespace {

// Kronrod 15 nodes/weights on [-1,1] and the embedded Gauss 7 weights
constexpr double xgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                           0.741531185599394, 0.586087235467691, 0.405845151377397,
                           0.207784955007898, 0.0};
constexpr double wgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                           0.140653259715525, 0.169004726639267, 0.190350578064785,
                           0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                          0.417959183673469};

void gk15(const std::function<cxd(double)>& f, double a, double b, cxd& kres, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cxd fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * xgk[i]);
    fv[14 - i] = f(c + h * xgk[i]);
  }
  fv[7] = f(c);
  cxd resk = wgk[7] * fv[7];
  cxd resg = wg[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    resk += wgk[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) resg += wg[i / 2] * (fv[i] + fv[14 - i]);
  }
  kres = resk * h;
  err = std::abs(resk - resg) * h;
}

cxd adapt(const std::function<cxd(double)>& f, double a, double b, double abs_tol,
          double rel_tol, int depth, int max_depth) {
  cxd res;
  double err;
  gk15(f, a, b, res, err);
  if (depth >= max_depth || err <= abs_tol || err <= rel_tol * std::abs(res)) return res;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, abs_tol / 2, rel_tol, depth + 1, max_depth) +
         adapt(f, c, b, abs_tol / 2, rel_tol, depth + 1, max_depth);
}

}  // namespace

cxd quad_gk(const std::function<cxd(double)>& f, double a, double b, double abs_tol,
            double rel_tol, int max_depth) {
  return adapt(f, a, b, abs_tol, rel_tol, 0, max_depth);
}

int green_required_points(double t, double k) {
  // phase range of t*cos(y) over half the interval, 20 points per period
  const double phase_range = t * (1.0 - std::cos(1.0 / std::abs(k)));
  return static_cast<int>(std::ceil(20.0 * phase_range / (2.0 * pi))) + 1;
}

GreenSample green_functions(double t, double k, int quad_points, int envelope_points) {
  if (t < k * k)
    throw std::invalid_argument("green_functions: requires t >= k^2");
  const int need = green_required_points(t, k);
  if (quad_points < need)
    throw std::invalid_argument("green_functions: unresolved phase, need at least " +
                                std::to_string(need) + " panels");
  const double L = 1.0 / std::abs(k);
  const int E = envelope_points | 1;  // odd so that y = 0 is a sample

  GreenSample gs;
  gs.t = t;
  gs.k = k;
  gs.y.resize(E);
  for (int i = 0; i < E; ++i) gs.y[i] = -L + 2.0 * L * i / (E - 1);

  auto osc1 = [&](double y) { return std::polar(1.0, t * std::cos(y)); };
  auto f2 = [&](double y) { return cxd(std::cos(y) - 1.0, -1.0 / (2.0 * t)); };
  auto osc2 = [&](double y) {
    const cxd v = f2(y);
    return std::polar(1.0, -t * std::cos(y)) / (v * v);
  };

  // panel integrals between envelope samples, each split so the phase stays resolved
  auto segment_integrals = [&](const std::function<cxd(double)>& f, double scale_tol) {
    std::vector<cxd> seg(E - 1);
    const int per_seg = (quad_points + E - 2) / (E - 1);
    for (int i = 0; i < E - 1; ++i) {
      cxd acc = 0.0;
      const double a = gs.y[i], b = gs.y[i + 1];
      for (int j = 0; j < per_seg; ++j) {
        const double aa = a + (b - a) * j / per_seg, bb = a + (b - a) * (j + 1) / per_seg;
        acc += quad_gk(f, aa, bb, scale_tol, 1e-12, 24);
      }
      seg[i] = acc;
    }
    return seg;
  };

  const std::vector<cxd> seg1 = segment_integrals(osc1, 1e-14 * L);
  // f2^{-2} peaks like t^2 near y = 0; scale the absolute tolerance accordingly
  const std::vector<cxd> seg2 = segment_integrals(osc2, 1e-13);

  std::vector<cxd> suffix1(E, 0.0), suffix2(E, 0.0);
  for (int i = E - 2; i >= 0; --i) {
    suffix1[i] = suffix1[i + 1] + seg1[i];
    suffix2[i] = suffix2[i + 1] + seg2[i];
  }
  gs.W1 = suffix1[0];
  gs.W2 = suffix2[0];

  gs.f1p.resize(E);
  gs.f1m.resize(E);
  gs.f2p.resize(E);
  gs.f2m.resize(E);
  for (int i = 0; i < E; ++i) {
    const cxd e = std::polar(1.0, -t * std::cos(gs.y[i]));
    gs.f1p[i] = e * suffix1[i];
    gs.f1m[i] = e * suffix1[E - 1 - i];  // f_{1-}(y) = f_{1+}(-y), independent panels
    gs.f2p[i] = f2(gs.y[i]) * suffix2[i];
    gs.f2m[i] = f2(gs.y[i]) * suffix2[E - 1 - i];
  }
  return gs;
}

}  // namespace kolmflow
