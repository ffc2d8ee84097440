#pragma once

#include <functional>
#include <vector>

#include "weylscope/frames.hpp"
#include "weylscope/linalg.hpp"
#include "weylscope/metric.hpp"

namespace weylscope {

/// All curvature tensors at one point.
///
/// Index conventions, fixed so the unit round sphere has S = n(n-1) > 0:
///   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
///   R_ijkl  = <R(e_i,e_j) e_l, e_k>   (unit S^4: R_ijkl = g_ik g_jl - g_il g_jk),
///   Ric_jl  = g^im R_mjil,  S = g^jl Ric_jl.
struct CurvatureData {
  ChartPoint point;
  Mat4 metric;
  Mat4 metric_inv;
  Christoffel gamma;
  Tensor4 riemann;  // fully lowered, chart units^-2
  Mat4 ricci;
  double scalar = 0.0;
  OrthonormalFrame frame;
  /// A-priori estimate of the finite-difference error in `riemann`;
  /// the first-Bianchi residual is checked against multiples of it.
  double fd_error_bound = 0.0;
  double bianchi_residual = 0.0;
};

/// Covariant tensor field of fixed rank: evaluator returning 4^rank
/// components, row-major in the index tuple.
struct TensorField {
  int rank = 0;
  std::function<std::vector<double>(const ChartPoint&)> eval;
};

namespace tensor {

/// Gamma^k_ij = (1/2) g^kl (d_i g_jl + d_j g_il - d_l g_ij).
Christoffel christoffel(const MetricPatch& patch, const ChartPoint& p);

/// Full curvature assembly at p (Riemann, Ricci, scalar, frame).
CurvatureData riemann(const MetricPatch& patch, const ChartPoint& p);

/// (nabla T)_{m i1..ir} = d_m T_{i1..ir} - sum_a Gamma^k_{m i_a} T_{..k..}.
/// The derivative index comes first. `step_scale` overrides the FD step for
/// the partial-derivative stencil (fields that are themselves FD-computed
/// should be differentiated at the nested step).
std::vector<double> covariant_derivative(const MetricPatch& patch, const ChartPoint& p,
                                         const TensorField& field,
                                         double step_scale = 0.0);

/// Rough Laplacian: Delta T = g^ab (nabla nabla T)_{ab ...}. Both nested
/// derivative levels use the nested FD step. Sign: Delta = trace of the
/// Hessian, so Delta of a concave bump is negative at its maximum.
std::vector<double> rough_laplacian(const MetricPatch& patch, const ChartPoint& p,
                                    const TensorField& field);

/// Metric norm of a rank-r covariant tensor: all indices raised with g^-1.
double tensor_norm(const std::vector<double>& values, int rank, const Mat4& metric_inv);

/// Stencil reach (in h2 / h1 units per axis) of each operation; used for the
/// DomainError margin checks and to shrink sweep grids.
struct Reach {
  double h2 = 0.0;
  double h1 = 0.0;
};
inline constexpr Reach kReachMetric{0.0, 0.0};
inline constexpr Reach kReachChristoffel{0.0, 2.0};
inline constexpr Reach kReachRiemann{2.0, 2.0};                 // dGamma at h2, dg at h1
inline constexpr Reach kReachGradCurvature{4.0, 2.0};           // nabla of a curvature field
inline constexpr Reach kReachLaplacianCurvature{6.0, 2.0};      // nested nabla nabla

}  // namespace tensor
}  // namespace weylscope
