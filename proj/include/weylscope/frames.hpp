#pragma once

#include <array>

#include "weylscope/linalg.hpp"

namespace weylscope {

/// Orthonormal tetrad. Column a of `vectors` holds the chart components of
/// e_a; `orientation` is the sign of det(vectors) relative to the chart
/// coordinate order.
struct OrthonormalFrame {
  Mat4 vectors = Mat4::Identity();
  int orientation = +1;

  /// Coframe theta^a_i = g_ij e_a^j (rows are the dual one-forms).
  Mat4 coframe(const Mat4& g) const { return (g * vectors).transpose(); }
};

/// Ordered basis of Lambda^2 built from a frame: first three span the
/// self-dual subspace of the orientation the frame encodes, last three the
/// anti-self-dual one. Each bivector is unit norm under
/// <e_i^e_j, e_k^e_l> = delta_ik delta_jl - delta_il delta_jk.
struct BivectorBasis {
  OrthonormalFrame frame;
  /// Coefficients over the frame pair basis (12),(13),(14),(23),(24),(34);
  /// column b = basis bivector b (0..2 self-dual, 3..5 anti-self-dual).
  Mat6 pair_coeffs = Mat6::Zero();
  /// The same bivectors as chart-coordinate 2-forms (covariant, antisym).
  std::array<Mat4, 6> chart_form{};
};

namespace frames {

/// Gram-Schmidt on the coordinate basis in index order (no pivoting);
/// if the requested orientation disagrees with the result, e_4 is negated.
OrthonormalFrame gram_schmidt_frame(const Mat4& g, int orientation);

/// Hodge star of the chart-order-oriented manifold in the frame's pair
/// basis: odd under frame orientation reversal. Involution, symmetric,
/// eigenvalues +1 (x3), -1 (x3).
Mat6 hodge_star(const OrthonormalFrame& frame);

/// w1 = (e1^e2 +- e3^e4)/sqrt2, w2 = (e1^e3 +- e4^e2)/sqrt2,
/// w3 = (e1^e4 +- e2^e3)/sqrt2. Needs the metric to form the chart 2-forms.
BivectorBasis selfdual_basis(const OrthonormalFrame& frame, const Mat4& g);

/// Projector (I +- star)/2 in the pair basis of an oriented frame.
Mat6 selfdual_projector(int sign);

/// Pair indices in basis order.
inline constexpr std::array<std::array<int, 2>, 6> kPairs = {{
    {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
}};

}  // namespace frames
}  // namespace weylscope
