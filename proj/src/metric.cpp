#include "weylscope/metric.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <utility>

#include "stencil.hpp"
#include "weylscope/errors.hpp"

namespace weylscope {

namespace {

constexpr double kDegeneracyFloor = 1e-10;

ChartPoint shifted(const ChartPoint& p, int axis, double delta) {
  ChartPoint q = p;
  q.x[axis] += delta;
  return q;
}

}  // namespace

MetricPatch::MetricPatch(ChartDomain domain, MetricFn components, PatchMetadata meta,
                         std::optional<MetricDerivFn> derivatives, FdSteps fd)
    : domain_(std::move(domain)),
      components_(std::move(components)),
      derivatives_(std::move(derivatives)),
      meta_(std::move(meta)),
      fd_(fd) {
  domain_.validate();
  if (!components_) throw ValidationError("metric patch '" + meta_.name + "': no evaluator");
  if (meta_.orientation != 1 && meta_.orientation != -1)
    throw ValidationError("orientation must be +1 or -1");

  if (derivatives_) {
    // Analytic derivatives must agree with central differences (rel < 1e-6).
    ChartPoint center;
    for (int i = 0; i < 4; ++i) center.x[i] = 0.5 * (domain_.lower[i] + domain_.upper[i]);
    for (int k = 0; k < 4; ++k) {
      const double h = fd_.h1(domain_, k);
      Mat4 fd_deriv = detail::central4(eval(shifted(center, k, -2 * h)),
                                       eval(shifted(center, k, -h)),
                                       eval(shifted(center, k, h)),
                                       eval(shifted(center, k, 2 * h)), h);
      Mat4 an = (*derivatives_)(center, k);
      double scale = std::max(1.0, an.cwiseAbs().maxCoeff());
      if ((fd_deriv - an).cwiseAbs().maxCoeff() > 1e-6 * scale)
        throw ValidationError("metric patch '" + meta_.name +
                              "': analytic derivative disagrees with finite differences (axis " +
                              std::to_string(k + 1) + ")");
    }
  }
}

Mat4 MetricPatch::eval(const ChartPoint& p) const {
  if (!p.finite() || !inside(p))
    throw DomainError("point outside chart '" + domain_.name + "'");
  Mat4 g = components_(p);
  g = 0.5 * (g + g.transpose().eval());
  if (!g.allFinite())
    throw DegenerateMetricError("metric '" + meta_.name + "' not finite at queried point");
  // Smallest eigenvalue > 1e-10, tested as positive definiteness of the
  // shifted matrix.
  Mat4 shifted_g = g - kDegeneracyFloor * Mat4::Identity();
  Eigen::LLT<Mat4> llt(shifted_g);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(g, Eigen::EigenvaluesOnly);
    std::ostringstream msg;
    msg << "metric '" << meta_.name << "' degenerate: smallest eigenvalue "
        << es.eigenvalues().minCoeff() << " <= 1e-10";
    throw DegenerateMetricError(msg.str());
  }
  return g;
}

Mat4 MetricPatch::deriv(const ChartPoint& p, int axis) const {
  if (derivatives_) return (*derivatives_)(p, axis);
  const double h = fd_.h1(domain_, axis);
  return detail::central4(eval(shifted(p, axis, -2 * h)), eval(shifted(p, axis, -h)),
                          eval(shifted(p, axis, h)), eval(shifted(p, axis, 2 * h)), h);
}

bool MetricPatch::inside(const ChartPoint& p, double reach_h2, double reach_h1) const {
  for (int i = 0; i < 4; ++i) {
    const double m = reach_h2 * fd_.h2(domain_, i) + reach_h1 * fd_.h1(domain_, i);
    if (p.x[i] < domain_.lower[i] + m || p.x[i] > domain_.upper[i] - m) return false;
  }
  return true;
}

void MetricPatch::require_margin(const ChartPoint& p, double reach_h2, double reach_h1) const {
  if (!p.finite()) throw DomainError("point has non-finite coordinates");
  if (!inside(p, reach_h2, reach_h1)) {
    std::ostringstream msg;
    msg << "point (" << p.x[0] << ", " << p.x[1] << ", " << p.x[2] << ", " << p.x[3]
        << ") too close to the boundary of chart '" << domain_.name
        << "' for the stencil (reach " << reach_h2 << " h2 + " << reach_h1 << " h1)";
    throw DomainError(msg.str());
  }
}

ChartDomain MetricPatch::interior_box(double reach_h2, double reach_h1) const {
  ChartDomain box = domain_;
  for (int i = 0; i < 4; ++i) {
    const double m = reach_h2 * fd_.h2(domain_, i) + reach_h1 * fd_.h1(domain_, i);
    box.lower[i] += m;
    box.upper[i] -= m;
  }
  return box;
}

MetricPatch MetricPatch::rescaled(double c) const {
  const double c2 = c * c;
  PatchMetadata meta = meta_;
  meta.name += "(rescaled)";
  if (meta.expected_scalar) *meta.expected_scalar /= c2;
  if (meta.expected_einstein_constant) *meta.expected_einstein_constant /= c2;
  MetricFn base = components_;
  MetricFn scaled = [base, c2](const ChartPoint& p) { return Mat4(c2 * base(p)); };
  std::optional<MetricDerivFn> dscaled;
  if (derivatives_) {
    MetricDerivFn dbase = *derivatives_;
    dscaled = [dbase, c2](const ChartPoint& p, int k) { return Mat4(c2 * dbase(p, k)); };
  }
  return MetricPatch(domain_, std::move(scaled), std::move(meta), std::move(dscaled), fd_);
}

}  // namespace weylscope
