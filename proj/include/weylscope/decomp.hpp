#pragma once

#include <array>
#include <utility>

#include "weylscope/frames.hpp"
#include "weylscope/linalg.hpp"
#include "weylscope/tensor.hpp"

namespace weylscope {

/// The curvature operator on Lambda^2 in a bivector basis (Lambda^+ first).
/// Block picture: [ W+ + S/12 I | Ric0 ; Ric0 | W- + S/12 I ], trace = S/2.
struct CurvatureOperator {
  Mat6 matrix = Mat6::Zero();

  Mat3 block_pp() const { return matrix.topLeftCorner<3, 3>(); }
  Mat3 block_pm() const { return matrix.topRightCorner<3, 3>(); }
  Mat3 block_mm() const { return matrix.bottomRightCorner<3, 3>(); }
};

enum class Side { self_dual, anti_self_dual };

/// Trace-free 3x3 block of the curvature operator on Lambda^+ or Lambda^-.
struct WeylBlock {
  Mat3 w = Mat3::Zero();
  double scalar = 0.0;
  Side side = Side::self_dual;
};

/// Sorted eigenvalues (ascending) with orthonormal eigenvectors in the
/// bivector-basis coordinates. `degenerate_gap[k]` flags lambda_{k+2}-lambda_{k+1}
/// below tolerance; eigenvectors inside a degenerate cluster are gauge.
struct WeylSpectrum {
  std::array<double, 3> lambda{};
  Mat3 vectors = Mat3::Identity();  // column k = eigenvector of lambda[k]
  std::array<bool, 2> degenerate_gap{};
};

enum class WeitzenbockForm { quadratic_adjugate, composition_norm };
enum class RootForm { lambda1, lambda3 };

namespace decomp {

/// 6x6 curvature operator from R evaluated on basis bivector pairs.
CurvatureOperator curvature_operator(const CurvatureData& cd, const BivectorBasis& basis);

/// w = block - (S/12) I, with the (verified small) residual trace removed.
WeylBlock extract_weyl(const CurvatureOperator& op, double scalar, Side side);

/// Eigenvalues via cyclic Jacobi on the symmetric 3x3, sorted ascending,
/// deterministic eigenvector signs (first nonzero component positive).
WeylSpectrum spectrum(const WeylBlock& block);

/// Adjugate, computed basis-free: adj(A) = A^2 - tr(A) A + e2(A) I with
/// e2 = ((tr A)^2 - tr(A^2))/2. In the eigenbasis of a symmetric w this is
/// diag(l2 l3, l1 l3, l1 l2).
Mat3 adjoint_matrix(const Mat3& w);

/// Right-hand side of Delta W+ = ... for a trace-free block:
///   quadratic_adjugate:  (S/2) w - 2 w^2 - 4 adj(w)
///   composition_norm:    (S/2) w - 6 w.w + 2 |w|^2 I,  |w|^2 = tr(w^2)
/// The two agree for trace-free w; enforced to 1e-12 as a postcondition.
Mat3 weitzenbock_rhs(const WeylBlock& block, double scalar, WeitzenbockForm form);

/// [(S/2) l3 - 2 l3^2 - 4 l1 l2] - [(S/2) l1 - 2 l1^2 - 4 l2 l3]
///   - 6 (l3 - l1)(l2 + S/12); identically zero for trace-free triples.
double eigenvalue_inequality_identity(const std::array<double, 3>& lambda, double scalar);

/// Under l2 = -S/12 and trace-free closure, returns
/// ( (S/2) l - 2 l^2 - 4 l' l'' ,  -2 (l + S/12)(l - S/6) ); the pair is equal.
std::pair<double, double> root_factorization(double lambda, double scalar, RootForm which);

/// Chart-component W+ 4-tensor at p: reconstructed from the Lambda^+ block,
/// frame-choice independent. Used to build the fields fed to nabla / Delta.
Tensor4 weyl_plus_tensor(const CurvatureData& cd, const BivectorBasis& basis);

/// Project a (pair-symmetric) 4-tensor onto the 3x3 operator on the span of
/// basis bivectors first..first+2: A_ab = (1/4) T_ijkl w_a^ij w_b^kl.
Mat3 project_onto_block(const Tensor4& t, const BivectorBasis& basis, const Mat4& metric_inv,
                        int first);

}  // namespace decomp
}  // namespace weylscope
