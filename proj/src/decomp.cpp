#include "weylscope/decomp.hpp"

#include <algorithm>
#include <cmath>

#include "weylscope/errors.hpp"

namespace weylscope::decomp {

namespace {

constexpr double kDegenerateGapRel = 1e-8;

/// Cyclic Jacobi for a symmetric 3x3: rotations over (0,1),(0,2),(1,2) until
/// the off-diagonal norm drops below 1e-14 * ||w||_F.
struct Jacobi3 {
  std::array<double, 3> eigenvalues{};
  Mat3 eigenvectors = Mat3::Identity();
};

double off_norm(const Mat3& a) {
  return std::sqrt(2.0 * (a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2)));
}

Jacobi3 jacobi_eigen3(const Mat3& input) {
  Mat3 a = 0.5 * (input + input.transpose());
  Mat3 v = Mat3::Identity();
  const double norm = a.norm();
  const double target = 1e-14 * norm;

  constexpr int kMaxSweeps = 50;
  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm(a) > target; ++sweep) {
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (int r = 0; r < 3; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p), arq = a(r, q);
            a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
            a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
  }
  if (off_norm(a) > target)
    throw ConvergenceError("Jacobi iteration: off-diagonal norm " + std::to_string(off_norm(a)) +
                           " above 1e-14 * ||w|| after " + std::to_string(kMaxSweeps) +
                           " sweeps");

  Jacobi3 out;
  std::array<int, 3> order = {0, 1, 2};
  std::array<double, 3> diag = {a(0, 0), a(1, 1), a(2, 2)};
  std::sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] < diag[y]; });
  for (int k = 0; k < 3; ++k) {
    out.eigenvalues[k] = diag[order[k]];
    out.eigenvectors.col(k) = v.col(order[k]);
    // Deterministic sign: first nonzero component positive.
    Vec3 col = out.eigenvectors.col(k);
    const double big = col.cwiseAbs().maxCoeff();
    for (int r = 0; r < 3; ++r) {
      if (std::abs(col(r)) > 1e-12 * big) {
        if (col(r) < 0.0) out.eigenvectors.col(k) = -col;
        break;
      }
    }
  }
  return out;
}

}  // namespace

CurvatureOperator curvature_operator(const CurvatureData& cd, const BivectorBasis& basis) {
  if (basis.frame.orientation != cd.frame.orientation ||
      (basis.frame.vectors - cd.frame.vectors).cwiseAbs().maxCoeff() > 1e-12)
    throw FrameMismatchError("bivector basis built from a different frame than the curvature data");

  // R in frame components, one index at a time.
  const Mat4& E = cd.frame.vectors;
  std::array<double, 256> t0 = cd.riemann.v, t1{};
  for (int stage = 0; stage < 4; ++stage) {
    // Contract the leading chart index with E, rotating indices:
    // t1[b,c,d,a] = sum_i t0[i,b,c,d] E(i,a).
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          for (int a = 0; a < 4; ++a) {
            double s = 0.0;
            for (int i = 0; i < 4; ++i) s += t0[Tensor4::idx(i, b, c, d)] * E(i, a);
            t1[Tensor4::idx(b, c, d, a)] = s;
          }
    t0 = t1;
  }

  Mat6 pairs;
  for (int al = 0; al < 6; ++al)
    for (int be = 0; be < 6; ++be)
      pairs(al, be) = t0[Tensor4::idx(frames::kPairs[al][0], frames::kPairs[al][1],
                                      frames::kPairs[be][0], frames::kPairs[be][1])];

  CurvatureOperator op;
  const Mat6& P = basis.pair_coeffs;
  op.matrix = P.transpose() * pairs * P;
  op.matrix = 0.5 * (op.matrix + op.matrix.transpose().eval());
  return op;
}

WeylBlock extract_weyl(const CurvatureOperator& op, double scalar, Side side) {
  WeylBlock block;
  block.scalar = scalar;
  block.side = side;
  const Mat3 raw = (side == Side::self_dual) ? op.block_pp() : op.block_mm();
  block.w = raw - (scalar / 12.0) * Mat3::Identity();
  const double trace = block.w.trace();
  if (std::abs(trace) > 1e-6 * std::max(block.w.norm(), std::abs(scalar)))
    throw TraceViolationError("Weyl block trace " + std::to_string(trace) +
                              " is inconsistent with the scalar part; assembly mismatch");
  // Fold the (verified small) residual trace out so downstream identities
  // see an exactly trace-free block.
  block.w -= (trace / 3.0) * Mat3::Identity();
  return block;
}

WeylSpectrum spectrum(const WeylBlock& block) {
  const Jacobi3 eig = jacobi_eigen3(block.w);
  WeylSpectrum spec;
  spec.lambda = eig.eigenvalues;
  spec.vectors = eig.eigenvectors;
  const double scale = std::max(block.w.norm(), 1e-300);
  spec.degenerate_gap[0] = (spec.lambda[1] - spec.lambda[0]) < kDegenerateGapRel * scale;
  spec.degenerate_gap[1] = (spec.lambda[2] - spec.lambda[1]) < kDegenerateGapRel * scale;
  return spec;
}

Mat3 adjoint_matrix(const Mat3& w) {
  const double tr = w.trace();
  const Mat3 w2 = w * w;
  const double e2 = 0.5 * (tr * tr - w2.trace());
  return w2 - tr * w + e2 * Mat3::Identity();
}

Mat3 weitzenbock_rhs(const WeylBlock& block, double scalar, WeitzenbockForm form) {
  const Mat3& w = block.w;
  if (std::abs(w.trace()) > 1e-10 * std::max(1.0, w.norm()))
    throw TraceViolationError("weitzenbock_rhs requires a trace-free block");

  const Mat3 w2 = w * w;
  const Mat3 first = (scalar / 2.0) * w - 2.0 * w2 - 4.0 * adjoint_matrix(w);
  const Mat3 second = (scalar / 2.0) * w - 6.0 * w2 + 2.0 * w2.trace() * Mat3::Identity();

  const double scale = std::max({1.0, first.norm(), second.norm()});
  if ((first - second).norm() > 1e-12 * scale)
    throw TraceViolationError("Weitzenboeck right-hand sides disagree beyond 1e-12");
  return form == WeitzenbockForm::quadratic_adjugate ? first : second;
}

double eigenvalue_inequality_identity(const std::array<double, 3>& lambda, double scalar) {
  const double l1 = lambda[0], l2 = lambda[1], l3 = lambda[2];
  const double scale = std::max({1.0, std::abs(l1), std::abs(l2), std::abs(l3)});
  if (std::abs(l1 + l2 + l3) > 1e-12 * scale)
    throw TraceViolationError("eigenvalue triple is not trace-free");
  const double top = scalar / 2.0 * l3 - 2.0 * l3 * l3 - 4.0 * l1 * l2;
  const double bottom = scalar / 2.0 * l1 - 2.0 * l1 * l1 - 4.0 * l2 * l3;
  return (top - bottom) - 6.0 * (l3 - l1) * (l2 + scalar / 12.0);
}

std::pair<double, double> root_factorization(double lambda, double scalar, RootForm which) {
  const double middle = -scalar / 12.0;
  const double other = -lambda - middle;  // trace-free closure
  // lambda1-form pairs lambda with l2 l3; lambda3-form with l1 l2. Either
  // way the companion product is middle * other.
  const double product = (which == RootForm::lambda1) ? middle * other : other * middle;
  const double unfactored = scalar / 2.0 * lambda - 2.0 * lambda * lambda - 4.0 * product;
  const double factored = -2.0 * (lambda + scalar / 12.0) * (lambda - scalar / 6.0);
  return {unfactored, factored};
}

Tensor4 weyl_plus_tensor(const CurvatureData& cd, const BivectorBasis& basis) {
  const CurvatureOperator op = curvature_operator(cd, basis);
  const WeylBlock block = extract_weyl(op, cd.scalar, Side::self_dual);

  Tensor4 t;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const double wab = block.w(a, b);
      if (wab == 0.0) continue;
      const Mat4& fa = basis.chart_form[a];
      const Mat4& fb = basis.chart_form[b];
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          const double faij = fa(i, j);
          if (faij == 0.0) continue;
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) t(i, j, k, l) += wab * faij * fb(k, l);
        }
    }
  return t;
}

Mat3 project_onto_block(const Tensor4& t, const BivectorBasis& basis, const Mat4& metric_inv,
                        int first) {
  std::array<Mat4, 3> raised;
  for (int a = 0; a < 3; ++a)
    raised[a] = metric_inv * basis.chart_form[first + a] * metric_inv;

  Mat3 out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          const double ra = raised[a](i, j);
          if (ra == 0.0) continue;
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) s += t(i, j, k, l) * ra * raised[b](k, l);
        }
      out(a, b) = 0.25 * s;
    }
  return out;
}

}  // namespace weylscope::decomp
