#include "weylscope/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "weylscope/errors.hpp"

namespace weylscope {

const std::vector<std::pair<Condition, std::string>>& condition_names() {
  static const std::vector<std::pair<Condition, std::string>> names = {
      {Condition::middle_eigenvalue, "middle_eigenvalue"},
      {Condition::half_pic, "half_pic"},
      {Condition::asd, "asd"},
      {Condition::kahler_spectrum, "kahler_spectrum"},
      {Condition::weitzenbock, "weitzenbock"},
      {Condition::divergence, "divergence"},
      {Condition::parallel_form, "parallel_form"},
  };
  return names;
}

std::optional<Condition> condition_from_name(const std::string& name) {
  for (const auto& [c, n] : condition_names())
    if (n == name) return c;
  return std::nullopt;
}

const std::string& to_string(Condition c) {
  for (const auto& [cond, n] : condition_names())
    if (cond == c) return n;
  throw ValidationError("unknown condition enum value");
}

namespace conditions {

namespace {

bool is_margin_condition(Condition c) {
  return c == Condition::middle_eigenvalue || c == Condition::half_pic;
}

tensor::Reach reach_for(Condition c) {
  switch (c) {
    case Condition::weitzenbock:
      return tensor::kReachLaplacianCurvature;
    case Condition::divergence:
    case Condition::parallel_form:
      return tensor::kReachGradCurvature;
    default:
      return tensor::kReachRiemann;
  }
}

/// W+ as a rank-4 covariant field on the chart (frame-choice independent).
TensorField weyl_plus_field(const MetricPatch& patch) {
  return TensorField{4, [&patch](const ChartPoint& q) {
                       const CurvatureData cd = tensor::riemann(patch, q);
                       const BivectorBasis basis = frames::selfdual_basis(cd.frame, cd.metric);
                       const Tensor4 t = decomp::weyl_plus_tensor(cd, basis);
                       return std::vector<double>(t.v.begin(), t.v.end());
                     }};
}

}  // namespace

MarginVerdict check_middle_eigenvalue(const WeylSpectrum& spec, double scalar, double tol) {
  MarginVerdict v;
  v.margin = spec.lambda[1] + scalar / 12.0;
  v.pass = v.margin >= -tol;
  return v;
}

HalfPicVerdict check_half_pic(const WeylSpectrum& spec, double scalar, double tol) {
  HalfPicVerdict v;
  v.scalar_margin = scalar;
  v.sum_margin = spec.lambda[0] + spec.lambda[1] + scalar / 6.0;
  v.pass = (v.scalar_margin >= -tol) && (v.sum_margin >= -tol);
  return v;
}

NormVerdict check_asd(const WeylBlock& block, double tol) {
  NormVerdict v;
  v.norm = block.w.norm();
  v.pass = v.norm < tol;
  return v;
}

KahlerSpectrumVerdict check_kahler_spectrum(const WeylSpectrum& spec, double scalar, double tol) {
  std::array<double, 3> target = {scalar / 6.0, -scalar / 12.0, -scalar / 12.0};
  std::sort(target.begin(), target.end());
  KahlerSpectrumVerdict v;
  double sq = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = spec.lambda[i] - target[i];
    sq += d * d;
  }
  v.residual = std::sqrt(sq);
  v.pass = v.residual < tol;
  v.branch = (scalar > tol) ? +1 : (scalar < -tol ? -1 : 0);
  return v;
}

double divergence_residual(const MetricPatch& patch, const ChartPoint& p) {
  patch.require_margin(p, tensor::kReachGradCurvature.h2, tensor::kReachGradCurvature.h1);
  const TensorField field = weyl_plus_field(patch);
  const std::vector<double> nab =
      tensor::covariant_derivative(patch, p, field, patch.fd().nested_scale);

  const Mat4 ginv = patch.eval(p).inverse();
  // (delta W+)_jkl = - g^im (nabla W+)_{m i j k l}
  std::vector<double> div(64, 0.0);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i)
          for (int m = 0; m < 4; ++m)
            s += ginv(i, m) * nab[std::size_t(((((m * 4) + i) * 4 + j) * 4 + k) * 4 + l)];
        div[std::size_t((j * 4 + k) * 4 + l)] = -s;
      }
  return tensor::tensor_norm(div, 3, ginv);
}

WeitzenbockResidual weitzenbock_residual(const MetricPatch& patch, const ChartPoint& p,
                                         double applicability_threshold) {
  patch.require_margin(p, tensor::kReachLaplacianCurvature.h2,
                       tensor::kReachLaplacianCurvature.h1);
  WeitzenbockResidual out;
  out.divergence_norm = divergence_residual(patch, p);
  out.applicable = out.divergence_norm < applicability_threshold;

  const TensorField field = weyl_plus_field(patch);
  const std::vector<double> lap = tensor::rough_laplacian(patch, p, field);
  Tensor4 lap4;
  std::copy(lap.begin(), lap.end(), lap4.v.begin());

  const CurvatureData cd = tensor::riemann(patch, p);
  const BivectorBasis basis = frames::selfdual_basis(cd.frame, cd.metric);
  const Mat3 lhs = decomp::project_onto_block(lap4, basis, cd.metric_inv, 0);

  const CurvatureOperator op = decomp::curvature_operator(cd, basis);
  const WeylBlock block = decomp::extract_weyl(op, cd.scalar, Side::self_dual);
  const Mat3 rhs = decomp::weitzenbock_rhs(block, cd.scalar, WeitzenbockForm::quadratic_adjugate);

  out.residual = lhs - rhs;
  out.norm = out.residual.norm();
  return out;
}

double check_almost_complex(const Mat4& omega, const Mat4& g) {
  const Mat4 j = g.inverse() * omega;
  return (j * j + Mat4::Identity()).norm();
}

TensorField distinguished_eigenform_field(const MetricPatch& patch, const ChartPoint& reference) {
  // Reference eigenform fixes the sign of the field across the stencil.
  auto eigenform_at = [&patch](const ChartPoint& q) {
    const CurvatureData cd = tensor::riemann(patch, q);
    const BivectorBasis basis = frames::selfdual_basis(cd.frame, cd.metric);
    const CurvatureOperator op = decomp::curvature_operator(cd, basis);
    const WeylBlock block = decomp::extract_weyl(op, cd.scalar, Side::self_dual);
    const WeylSpectrum spec = decomp::spectrum(block);

    const int which = cd.scalar > 0.0 ? 2 : 0;  // top for S > 0, bottom for S < 0
    const double gap = which == 2 ? spec.lambda[2] - spec.lambda[1]
                                  : spec.lambda[1] - spec.lambda[0];
    if (gap < 1e-6)
      throw DegenerateEigenvectorError(
          "distinguished W+ eigenvalue is not isolated (gap " + std::to_string(gap) +
          " < 1e-6); the eigenform is gauge");
    Mat4 omega = Mat4::Zero();
    for (int a = 0; a < 3; ++a) omega += spec.vectors(a, which) * basis.chart_form[a];
    return Mat4(std::sqrt(2.0) * omega);  // |omega|^2 = 2 normalization
  };

  const Mat4 ref = eigenform_at(reference);
  return TensorField{2, [eigenform_at, ref](const ChartPoint& q) {
                       Mat4 w = eigenform_at(q);
                       // Continuity: align sign with the reference form.
                       if ((w.array() * ref.array()).sum() < 0.0) w = -w;
                       std::vector<double> out(16);
                       for (int i = 0; i < 4; ++i)
                         for (int j = 0; j < 4; ++j) out[std::size_t(i * 4 + j)] = w(i, j);
                       return out;
                     }};
}

double kahler_form_parallel(const MetricPatch& patch, const ChartPoint& p,
                            const TensorField& omega_field) {
  const std::vector<double> nab =
      tensor::covariant_derivative(patch, p, omega_field, patch.fd().nested_scale);
  return tensor::tensor_norm(nab, 3, patch.eval(p).inverse());
}

ConditionReport grid_sweep(const MetricPatch& patch, const std::vector<Condition>& selected,
                           const SweepOptions& options) {
  if (options.resolution < 2) throw ValidationError("grid resolution must be >= 2 per axis");
  if (options.workers < 1) throw ValidationError("worker count must be >= 1");
  if (selected.empty()) throw ValidationError("no conditions selected");

  const std::size_t total = [&] {
    std::size_t n = 1;
    for (int i = 0; i < 4; ++i) n *= std::size_t(options.resolution);
    return n;
  }();
  if (total > options.budget)
    throw BudgetExceededError("grid of " + std::to_string(total) +
                              " points exceeds the budget of " + std::to_string(options.budget));

  tensor::Reach reach = tensor::kReachRiemann;
  for (Condition c : selected) {
    reach.h2 = std::max(reach.h2, reach_for(c).h2);
    reach.h1 = std::max(reach.h1, reach_for(c).h1);
  }
  const ChartDomain box = patch.interior_box(reach.h2, reach.h1);
  box.validate();

  const int res = options.resolution;
  auto point_at = [&](std::size_t flat) {
    ChartPoint p;
    std::size_t rest = flat;
    for (int axis = 3; axis >= 0; --axis) {
      const int t = int(rest % std::size_t(res));
      rest /= std::size_t(res);
      p.x[axis] = box.lower[axis] + (box.upper[axis] - box.lower[axis]) * double(t) / double(res - 1);
    }
    return p;
  };

  const bool want_weitz = std::count(selected.begin(), selected.end(), Condition::weitzenbock) > 0;
  const bool want_div = std::count(selected.begin(), selected.end(), Condition::divergence) > 0;
  const bool want_parallel =
      std::count(selected.begin(), selected.end(), Condition::parallel_form) > 0;

  std::vector<PointRecord> records(total);
  auto evaluate_point = [&](std::size_t flat) {
    PointRecord rec;
    rec.point = point_at(flat);
    const CurvatureData cd = tensor::riemann(patch, rec.point);
    const BivectorBasis basis = frames::selfdual_basis(cd.frame, cd.metric);
    const CurvatureOperator op = decomp::curvature_operator(cd, basis);
    const WeylBlock block = decomp::extract_weyl(op, cd.scalar, Side::self_dual);
    const WeylSpectrum spec = decomp::spectrum(block);
    rec.scalar = cd.scalar;
    rec.lambda = spec.lambda;

    const Tolerances& tol = options.tolerances;
    for (Condition c : selected) {
      switch (c) {
        case Condition::middle_eigenvalue:
          rec.values[c] = check_middle_eigenvalue(spec, cd.scalar, tol.fd).margin;
          break;
        case Condition::half_pic: {
          const HalfPicVerdict v = check_half_pic(spec, cd.scalar, tol.fd);
          rec.values[c] = std::min(v.scalar_margin, v.sum_margin);
          break;
        }
        case Condition::asd:
          rec.values[c] = check_asd(block, tol.fd).norm;
          break;
        case Condition::kahler_spectrum:
          rec.values[c] = check_kahler_spectrum(spec, cd.scalar, tol.fd).residual;
          break;
        case Condition::divergence:
          if (want_div) rec.values[c] = divergence_residual(patch, rec.point);
          break;
        case Condition::weitzenbock:
          if (want_weitz) {
            const WeitzenbockResidual w = weitzenbock_residual(patch, rec.point);
            rec.values[c] = w.norm;
            rec.weitzenbock_applicable = w.applicable;
          }
          break;
        case Condition::parallel_form:
          if (want_parallel) {
            const TensorField omega = distinguished_eigenform_field(patch, rec.point);
            rec.values[c] = kahler_form_parallel(patch, rec.point, omega);
          }
          break;
      }
    }
    return rec;
  };

  // Fan out to workers; each slot is written by exactly one worker, then
  // aggregated serially in point order (deterministic regardless of
  // interleaving).
  const int workers = std::min<int>(options.workers, int(total));
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) records[i] = evaluate_point(i);
  } else {
    std::vector<std::exception_ptr> errors(std::size_t(workers));
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = std::size_t(w); i < total; i += std::size_t(workers))
            records[i] = evaluate_point(i);
        } catch (...) {
          errors[std::size_t(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  ConditionReport report;
  report.metric_name = patch.meta().name;
  report.orientation = patch.meta().orientation;
  report.resolution = res;
  report.total_points = total;
  report.tolerances = options.tolerances;
  report.scalar_min = records.front().scalar;
  report.scalar_max = records.front().scalar;
  for (const PointRecord& rec : records) {
    report.scalar_min = std::min(report.scalar_min, rec.scalar);
    report.scalar_max = std::max(report.scalar_max, rec.scalar);
  }

  for (Condition c : selected) {
    ConditionSummary sum;
    sum.condition = c;
    sum.is_margin = is_margin_condition(c);
    sum.tolerance = options.tolerances.fd;
    bool seen = false;
    for (const PointRecord& rec : records) {
      auto it = rec.values.find(c);
      if (it == rec.values.end()) continue;
      const double v = it->second;
      const bool better = !seen || (sum.is_margin ? v < sum.extremum : v > sum.extremum);
      if (better) {
        sum.extremum = v;
        sum.arg_extremum = rec.point;
        seen = true;
      }
    }
    sum.pass = sum.is_margin ? (sum.extremum >= -sum.tolerance) : (sum.extremum < sum.tolerance);
    report.summaries.push_back(sum);
  }
  if (options.keep_points) report.points = std::move(records);
  return report;
}

}  // namespace conditions
}  // namespace weylscope
