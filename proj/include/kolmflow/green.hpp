#pragma once

#include <functional>

#include "kolmflow/common.hpp"

namespace kolmflow {

// adaptive Gauss-Kronrod 7-15 on [a, b]
cxd quad_gk(const std::function<cxd(double)>& f, double a, double b,
            double abs_tol = 1e-12, double rel_tol = 1e-11, int max_depth = 32);

// Oscillatory Green-function data on I = [-1/|k|, 1/|k|]:
//   f1 = e^{-i t b},  f_{1+}(y) = f1(y) int_y^{1/|k|} e^{i t b},  f_{1-}(y) = f_{1+}(-y),
//   W1 = int_I e^{i t b};
//   f2 = b - 1 + 1/(2 i t),  f_{2+}(y) = f2(y) int_y^{1/|k|} e^{-i t b} f2^{-2},
//   W2 = int_I e^{-i t b} f2^{-2}.
struct GreenSample {
  double t = 0.0, k = 0.0;
  cxd W1, W2;
  std::vector<double> y;
  std::vector<cxd> f1p, f1m, f2p, f2m;
};

// quad_points panels must resolve the phase t*b: >= 20 points per period
GreenSample green_functions(double t, double k, int quad_points, int envelope_points = 129);

int green_required_points(double t, double k);

}  // namespace kolmflow
