#pragma once

#include <functional>
#include <optional>
#include <string>

#include "weylscope/chart.hpp"
#include "weylscope/linalg.hpp"

namespace weylscope {

/// Finite-difference step policy, per coordinate axis scaled by the domain
/// extent. Plain first derivatives of closed-form data use `first_scale`;
/// any derivative of a field that is itself finite-difference-computed
/// (nested second derivatives) uses the coarser `nested_scale` so roundoff
/// noise is not amplified past the truncation error.
struct FdSteps {
  double first_scale = 1e-3;
  double nested_scale = 3.1622776601683794e-3;  // 10^(-2.5)

  double h1(const ChartDomain& d, int axis) const { return first_scale * d.extent(axis); }
  double h2(const ChartDomain& d, int axis) const { return nested_scale * d.extent(axis); }
};

struct PatchMetadata {
  std::string name;
  std::optional<double> expected_einstein_constant;
  std::optional<double> expected_scalar;
  int orientation = +1;  // +1: chart coordinate order
};

using MetricFn = std::function<Mat4(const ChartPoint&)>;
/// Analytic partial derivative d_k g_ij (axis k).
using MetricDerivFn = std::function<Mat4(const ChartPoint&, int)>;

/// Evaluator for g_ij(x) on one chart. Evaluation validates positive
/// definiteness (smallest eigenvalue > 1e-10) at every queried point;
/// degenerate metrics are rejected, not regularized.
class MetricPatch {
 public:
  MetricPatch(ChartDomain domain, MetricFn components, PatchMetadata meta = {},
              std::optional<MetricDerivFn> derivatives = std::nullopt, FdSteps fd = {});

  const ChartDomain& domain() const { return domain_; }
  const PatchMetadata& meta() const { return meta_; }
  const FdSteps& fd() const { return fd_; }
  bool has_analytic_derivatives() const { return derivatives_.has_value(); }

  /// g_ij(p); throws DomainError / DegenerateMetricError.
  Mat4 eval(const ChartPoint& p) const;

  /// d_k g_ij(p): analytic when available, else 4th-order central differences.
  Mat4 deriv(const ChartPoint& p, int axis) const;

  /// Throws DomainError unless [p - reach, p + reach] lies in the box.
  /// `reach` is in units of h2 per axis; the h1 tail of nested stencils is
  /// accounted for on top.
  void require_margin(const ChartPoint& p, double reach_h2, double reach_h1 = 0.0) const;

  bool inside(const ChartPoint& p, double reach_h2 = 0.0, double reach_h1 = 0.0) const;

  /// The box shrunk by the given stencil reach; sampling/grids stay inside it.
  ChartDomain interior_box(double reach_h2, double reach_h1 = 0.0) const;

  /// Same patch with rescaled metric g -> c^2 g (derivatives rescale too).
  MetricPatch rescaled(double c) const;

 private:
  ChartDomain domain_;
  MetricFn components_;
  std::optional<MetricDerivFn> derivatives_;
  PatchMetadata meta_;
  FdSteps fd_;
};

}  // namespace weylscope
