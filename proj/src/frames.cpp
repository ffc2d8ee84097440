#include "weylscope/frames.hpp"

#include <cmath>

#include "weylscope/errors.hpp"

namespace weylscope::frames {

OrthonormalFrame gram_schmidt_frame(const Mat4& g, int orientation) {
  if (orientation != 1 && orientation != -1)
    throw ValidationError("orientation must be +1 or -1");
  OrthonormalFrame frame;
  Mat4& E = frame.vectors;
  E.setZero();
  for (int a = 0; a < 4; ++a) {
    Vec4 v = Vec4::Unit(a);
    for (int b = 0; b < a; ++b) {
      const double proj = E.col(b).dot(g * v);
      v -= proj * E.col(b);
    }
    const double nsq = v.dot(g * v);
    if (!(nsq > 1e-10))
      throw DegenerateMetricError("Gram-Schmidt failed: metric not positive definite");
    E.col(a) = v / std::sqrt(nsq);
  }
  // Index-order Gram-Schmidt is upper triangular with positive diagonal, so
  // the result is chart-order oriented; flip e4 when -1 was requested.
  if (orientation == -1) E.col(3) = -E.col(3);
  frame.orientation = orientation;
  return frame;
}

Mat6 hodge_star(const OrthonormalFrame& frame) {
  // In an oriented orthonormal frame: *(e1^e2)=e3^e4, *(e1^e3)=-e2^e4,
  // *(e1^e4)=e2^e3; odd under orientation reversal.
  Mat6 star = Mat6::Zero();
  star(0, 5) = star(5, 0) = 1.0;
  star(1, 4) = star(4, 1) = -1.0;
  star(2, 3) = star(3, 2) = 1.0;
  return frame.orientation * star;
}

Mat6 selfdual_projector(int sign) {
  OrthonormalFrame oriented;  // identity, +1
  return 0.5 * (Mat6::Identity() + double(sign) * hodge_star(oriented));
}

BivectorBasis selfdual_basis(const OrthonormalFrame& frame, const Mat4& g) {
  BivectorBasis basis;
  basis.frame = frame;

  const double s = 1.0 / std::sqrt(2.0);
  Mat6& P = basis.pair_coeffs;
  P.setZero();
  // Pair order (12),(13),(14),(23),(24),(34); e4^e2 = -(e2^e4).
  P(0, 0) = s; P(5, 0) = s;    // w1+ = (e1^e2 + e3^e4)/sqrt2
  P(1, 1) = s; P(4, 1) = -s;   // w2+ = (e1^e3 + e4^e2)/sqrt2
  P(2, 2) = s; P(3, 2) = s;    // w3+ = (e1^e4 + e2^e3)/sqrt2
  P(0, 3) = s; P(5, 3) = -s;
  P(1, 4) = s; P(4, 4) = s;
  P(2, 5) = s; P(3, 5) = -s;

  // Chart 2-form of each basis bivector via the coframe:
  // (e_a ^ e_b)_ij = theta^a_i theta^b_j - theta^a_j theta^b_i.
  const Mat4 theta = frame.coframe(g);
  for (int col = 0; col < 6; ++col) {
    Mat4 form = Mat4::Zero();
    for (int pr = 0; pr < 6; ++pr) {
      const double c = P(pr, col);
      if (c == 0.0) continue;
      const int a = kPairs[pr][0];
      const int b = kPairs[pr][1];
      form += c * (theta.row(a).transpose() * theta.row(b) -
                   theta.row(b).transpose() * theta.row(a));
    }
    basis.chart_form[col] = form;
  }
  return basis;
}

}  // namespace weylscope::frames
