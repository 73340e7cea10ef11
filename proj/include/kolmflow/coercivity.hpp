#pragma once

#include "kolmflow/operators.hpp"

namespace kolmflow {

// delta(s) = 4 - max((8s^2+7s+2)s/2, 8s^2+8s-1), defined for s in [0, 0.4]
double delta_s(double s);

struct SequenceTriple {
  long long n = 0;
  double k = 0.0, s = 0.0;
  double a = 0.0, b = 0.0, c = 0.0;
};

// a_n = n^2+k^2, b_n and c_n evaluated exactly as written
SequenceTriple sequence_abc(long long n, double k, double s);

struct Lemma9Report {
  double min_slack_b = 0.0, min_slack_c = 0.0;
  SequenceTriple argmin_b, argmin_c;
  long long points = 0;
};

// minima of b_n - k^2 a_n^s and c_n - delta(s) a_n^s over the sweep
Lemma9Report check_lemma9(const std::vector<double>& k_set, long long n_max,
                          const std::vector<double>& s_grid);

struct CoerciveCheck {
  double lemma8_residual = 0.0;   // interior max-abs of LHS - (4 A H0 A + H*)
  double min_eig = 0.0;           // of the Hermitian part of W * M
  double hermiticity_defect = 0.0;
  double h_symbol_mismatch = 0.0; // operator-assembled H0/H* vs diagonal b_n/c_n
};

// M = L1 (-Dk)^s L1 + 2(1-B^2)(-Dk)^{1+s} + 2(-Dk)^{1+s}(1-B^2)
//     - 4k^2 A (-Dk)^s A - delta(s) (-Dk)^s,
// assembled on a padded index range and cropped, so the matrix is the exact
// compression of the operator and inherits positivity in the star product.
CoerciveCheck coercive_matrix_check(double k, double s, int N, int margin = 8);

// diagonal H0, H* from the closed-form symbols
OperatorMatrix build_H0(double k, double s, int N);
OperatorMatrix build_Hstar(double k, double s, int N);
// the same operators assembled from compositions of shifts and diagonals
OperatorMatrix build_H0_operator(double k, double s, int N);
OperatorMatrix build_Hstar_operator(double k, double s, int N);

}  // namespace kolmflow
