#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weylscope/decomp.hpp"
#include "weylscope/metric.hpp"
#include "weylscope/tensor.hpp"

namespace weylscope {

/// Conditions the sweep can evaluate. The first four are algebraic in the
/// pointwise spectrum; the last three are finite-difference residuals.
enum class Condition {
  middle_eigenvalue,
  half_pic,
  asd,
  kahler_spectrum,
  weitzenbock,
  divergence,
  parallel_form,
};

const std::vector<std::pair<Condition, std::string>>& condition_names();
std::optional<Condition> condition_from_name(const std::string& name);
const std::string& to_string(Condition c);

struct Tolerances {
  double algebraic = 1e-10;  // relative, roundoff-level identities
  double fd = 1e-4;          // absolute, truncation-level residuals
};

namespace conditions {

struct MarginVerdict {
  double margin = 0.0;
  bool pass = false;
};

struct HalfPicVerdict {
  double scalar_margin = 0.0;  // S
  double sum_margin = 0.0;     // l1 + l2 + S/6
  bool pass = false;
};

struct NormVerdict {
  double norm = 0.0;
  bool pass = false;
};

struct KahlerSpectrumVerdict {
  double residual = 0.0;
  bool pass = false;
  int branch = 0;  // +1: (.., -S/12, S/6) S>0;  -1: (S/6, -S/12, ..) S<0;  0: S ~ 0
};

/// margin = l2 + S/12; pass iff margin >= -tol.
MarginVerdict check_middle_eigenvalue(const WeylSpectrum& spec, double scalar, double tol);

/// pass iff S >= -tol and l1 + l2 + S/6 >= -tol. Implies the middle-eigenvalue
/// condition.
HalfPicVerdict check_half_pic(const WeylSpectrum& spec, double scalar, double tol);

/// Frobenius norm of the block; pass iff below tol.
NormVerdict check_asd(const WeylBlock& block, double tol);

/// Distance of the sorted spectrum from sorted (S/6, -S/12, -S/12).
KahlerSpectrumVerdict check_kahler_spectrum(const WeylSpectrum& spec, double scalar, double tol);

struct WeitzenbockResidual {
  Mat3 residual = Mat3::Zero();
  double norm = 0.0;
  double divergence_norm = 0.0;
  /// False when delta W+ is large: the formula assumes a harmonic self-dual
  /// Weyl tensor and need not hold.
  bool applicable = true;
};

/// || Delta W+ - [(S/2) W+ - 2 (W+)^2 - 4 (W+)^#] || at p, the Laplacian
/// taken of the W+ 4-tensor field and projected back onto Lambda^+ at p.
WeitzenbockResidual weitzenbock_residual(const MetricPatch& patch, const ChartPoint& p,
                                         double applicability_threshold = 1e-2);

/// || delta W+ ||_g with (delta W+)_jkl = -g^im (nabla W+)_{m i j k l}.
double divergence_residual(const MetricPatch& patch, const ChartPoint& p);

/// || J J + id ||_F for J^i_j = g^ik omega_kj; omega should carry the
/// |omega|^2 = 2 normalization.
double check_almost_complex(const Mat4& omega, const Mat4& g);

/// Rank-2 field propagating the distinguished W+ eigenform (top eigenvalue
/// for S > 0, bottom for S < 0), sign-aligned with the reference point and
/// scaled to |omega|^2 = 2. Throws DegenerateEigenvectorError when the
/// distinguished eigenvalue is not isolated (gap < 1e-6).
TensorField distinguished_eigenform_field(const MetricPatch& patch, const ChartPoint& reference);

/// || nabla omega ||_g at p for a rank-2 field.
double kahler_form_parallel(const MetricPatch& patch, const ChartPoint& p,
                            const TensorField& omega_field);

/// One grid point's evaluation.
struct PointRecord {
  ChartPoint point;
  double scalar = 0.0;
  std::array<double, 3> lambda{};
  std::map<Condition, double> values;  // margin (algebraic) or residual norm
  bool weitzenbock_applicable = true;
};

/// Aggregate for one condition over the sweep: the worst value and where.
struct ConditionSummary {
  Condition condition{};
  bool is_margin = false;  // margins aggregate by min; residuals by max
  double extremum = 0.0;
  ChartPoint arg_extremum;
  bool pass = false;
  double tolerance = 0.0;
};

/// Aggregated verdicts over a sampling grid. Every verdict is reproducible
/// from its stored extremum and tolerance.
struct ConditionReport {
  std::string metric_name;
  int orientation = +1;
  int resolution = 0;
  std::size_t total_points = 0;
  Tolerances tolerances;
  std::vector<ConditionSummary> summaries;
  double scalar_min = 0.0, scalar_max = 0.0;
  std::vector<PointRecord> points;  // kept only when requested
};

struct SweepOptions {
  int resolution = 5;          // per axis, >= 2
  Tolerances tolerances{};
  int workers = 1;
  std::size_t budget = 1000000;  // max total grid points
  bool keep_points = false;
};

/// Evaluates the selected conditions on a uniform grid over the chart box
/// shrunk by the worst-case stencil margin of the selection. Point
/// evaluations fan out to `workers` threads; aggregation is deterministic
/// (lexicographic point order breaks ties).
ConditionReport grid_sweep(const MetricPatch& patch, const std::vector<Condition>& selected,
                           const SweepOptions& options);

}  // namespace conditions
}  // namespace weylscope
