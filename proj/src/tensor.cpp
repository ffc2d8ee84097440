#include "weylscope/tensor.hpp"

#include <cmath>
#include <limits>

#include "stencil.hpp"
#include "weylscope/errors.hpp"

namespace weylscope::tensor {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

ChartPoint shifted(const ChartPoint& p, int axis, double delta) {
  ChartPoint q = p;
  q.x[axis] += delta;
  return q;
}

Christoffel christoffel_from(const Mat4& ginv, const std::array<Mat4, 4>& dg) {
  Christoffel gamma;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        double s = 0.0;
        for (int l = 0; l < 4; ++l)
          s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma(k, i, j) = 0.5 * s;
        gamma(k, j, i) = 0.5 * s;
      }
  return gamma;
}

}  // namespace

Christoffel christoffel(const MetricPatch& patch, const ChartPoint& p) {
  patch.require_margin(p, kReachChristoffel.h2, kReachChristoffel.h1);
  const Mat4 g = patch.eval(p);
  const Mat4 ginv = g.inverse();
  std::array<Mat4, 4> dg;
  for (int k = 0; k < 4; ++k) dg[k] = patch.deriv(p, k);
  return christoffel_from(ginv, dg);
}

CurvatureData riemann(const MetricPatch& patch, const ChartPoint& p) {
  patch.require_margin(p, kReachRiemann.h2, kReachRiemann.h1);

  CurvatureData cd;
  cd.point = p;
  cd.metric = patch.eval(p);
  cd.metric_inv = cd.metric.inverse();
  cd.gamma = christoffel(patch, p);

  // dGamma at the nested step: Gamma is itself finite-difference data.
  std::array<Christoffel, 4> dgamma;
  for (int i = 0; i < 4; ++i) {
    const double h = patch.fd().h2(patch.domain(), i);
    const Christoffel m2 = christoffel(patch, shifted(p, i, -2 * h));
    const Christoffel m1 = christoffel(patch, shifted(p, i, -h));
    const Christoffel p1 = christoffel(patch, shifted(p, i, h));
    const Christoffel p2 = christoffel(patch, shifted(p, i, 2 * h));
    const double inv = 1.0 / (12.0 * h);
    for (int t = 0; t < 64; ++t)
      dgamma[i].v[t] = (m2.v[t] - 8.0 * m1.v[t] + 8.0 * p1.v[t] - p2.v[t]) * inv;
  }

  // Rhat^m_ijl = d_i Gamma^m_jl - d_j Gamma^m_il + Gamma Gamma terms,
  // exactly antisymmetric in (i,j) by evaluating i<j only.
  std::array<double, 256> rhat{};
  const auto& G = cd.gamma;
  for (int m = 0; m < 4; ++m)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (int l = 0; l < 4; ++l) {
          double s = dgamma[i](m, j, l) - dgamma[j](m, i, l);
          for (int a = 0; a < 4; ++a)
            s += G(m, i, a) * G(a, j, l) - G(m, j, a) * G(a, i, l);
          rhat[Tensor4::idx(m, i, j, l)] = s;
          rhat[Tensor4::idx(m, j, i, l)] = -s;
        }

  // Lower: R_ijkl = g_km Rhat^m_ijl, then project onto the symmetry class
  // (antisymmetric in (k,l), symmetric under pair exchange); the projection
  // removes truncation-level symmetry violations without touching Bianchi.
  Tensor4 raw;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += cd.metric(k, m) * rhat[Tensor4::idx(m, i, j, l)];
          raw(i, j, k, l) = s;
        }
  Tensor4 anti;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          anti(i, j, k, l) = 0.5 * (raw(i, j, k, l) - raw(i, j, l, k));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          cd.riemann(i, j, k, l) = 0.5 * (anti(i, j, k, l) + anti(k, l, i, j));

  // Ric_jl = g^im R_mjil; S = g^jl Ric_jl (both exact contractions of the
  // stored tensor).
  for (int j = 0; j < 4; ++j)
    for (int l = j; l < 4; ++l) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int m = 0; m < 4; ++m) s += cd.metric_inv(i, m) * cd.riemann(m, j, i, l);
      cd.ricci(j, l) = s;
      cd.ricci(l, j) = s;
    }
  cd.scalar = (cd.metric_inv * cd.ricci).trace();

  cd.frame = frames::gram_schmidt_frame(cd.metric, patch.meta().orientation);

  // A-priori FD error estimate: roundoff amplification of the nested first
  // derivatives plus the 4th-order truncation term.
  double h2min = std::numeric_limits<double>::max();
  double h2max = 0.0;
  for (int i = 0; i < 4; ++i) {
    h2min = std::min(h2min, patch.fd().h2(patch.domain(), i));
    h2max = std::max(h2max, patch.fd().h2(patch.domain(), i));
  }
  const double scale = 1.0 + cd.riemann.max_abs() + cd.gamma.max_abs();
  cd.fd_error_bound = 100.0 * scale * (kEps / (h2min * h2min) + std::pow(h2max, 4));

  double bianchi = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          bianchi = std::max(bianchi, std::abs(cd.riemann(i, j, k, l) + cd.riemann(i, k, l, j) +
                                               cd.riemann(i, l, j, k)));
  cd.bianchi_residual = bianchi;
  if (bianchi > 100.0 * cd.fd_error_bound)
    throw NumericalInstabilityError("first Bianchi residual " + std::to_string(bianchi) +
                                    " exceeds 100x the finite-difference error bound " +
                                    std::to_string(cd.fd_error_bound) + " on '" +
                                    patch.meta().name + "'");
  return cd;
}

std::vector<double> covariant_derivative(const MetricPatch& patch, const ChartPoint& p,
                                         const TensorField& field, double step_scale) {
  const double scale = step_scale > 0.0 ? step_scale : patch.fd().first_scale;
  const int rank = field.rank;
  const std::size_t n = std::size_t(1) << (2 * rank);  // 4^rank
  std::vector<double> out(4 * n);

  // Partial derivatives along each axis.
  for (int m = 0; m < 4; ++m) {
    const double h = scale * patch.domain().extent(m);
    if (p.x[m] - 2 * h < patch.domain().lower[m] || p.x[m] + 2 * h > patch.domain().upper[m])
      throw DomainError("covariant_derivative stencil leaves chart '" + patch.domain().name +
                        "' along axis " + std::to_string(m + 1));
    std::vector<double> d = detail::central4(field.eval(shifted(p, m, -2 * h)),
                                             field.eval(shifted(p, m, -h)),
                                             field.eval(shifted(p, m, h)),
                                             field.eval(shifted(p, m, 2 * h)), h);
    if (d.size() != n) throw ValidationError("tensor field returned wrong component count");
    std::copy(d.begin(), d.end(), out.begin() + m * n);
  }
  if (rank == 0) return out;

  const Christoffel gamma = christoffel(patch, p);
  const std::vector<double> center = field.eval(p);

  // Connection terms: (nabla T)_{m I} -= Gamma^k_{m i_a} T_{I, i_a -> k}.
  std::vector<std::size_t> stride(rank);
  for (int a = 0; a < rank; ++a) stride[a] = std::size_t(1) << (2 * (rank - 1 - a));
  for (int m = 0; m < 4; ++m) {
    double* slot = out.data() + m * n;
    for (std::size_t key = 0; key < n; ++key) {
      double corr = 0.0;
      for (int a = 0; a < rank; ++a) {
        const int ia = int((key / stride[a]) % 4);
        const std::size_t base = key - std::size_t(ia) * stride[a];
        for (int k = 0; k < 4; ++k)
          corr += gamma(k, m, ia) * center[base + std::size_t(k) * stride[a]];
      }
      slot[key] -= corr;
    }
  }
  return out;
}

std::vector<double> rough_laplacian(const MetricPatch& patch, const ChartPoint& p,
                                    const TensorField& field) {
  const double nested = patch.fd().nested_scale;
  TensorField grad{field.rank + 1, [&patch, &field, nested](const ChartPoint& q) {
                     return covariant_derivative(patch, q, field, nested);
                   }};
  const std::vector<double> hess = covariant_derivative(patch, p, grad, nested);
  const Mat4 ginv = patch.eval(p).inverse();

  const std::size_t n = std::size_t(1) << (2 * field.rank);
  std::vector<double> out(n, 0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double w = ginv(a, b);
      const double* block = hess.data() + (std::size_t(a) * 4 + b) * n;
      for (std::size_t i = 0; i < n; ++i) out[i] += w * block[i];
    }
  return out;
}

double tensor_norm(const std::vector<double>& values, int rank, const Mat4& metric_inv) {
  const std::size_t n = std::size_t(1) << (2 * rank);
  if (values.size() != n) throw ValidationError("tensor_norm: component count does not match rank");
  if (rank == 0) return std::abs(values[0]);

  // Raise one index at a time, then contract against the original.
  std::vector<double> raised = values;
  std::vector<double> tmp(n);
  for (int a = 0; a < rank; ++a) {
    const std::size_t stride = std::size_t(1) << (2 * (rank - 1 - a));
    for (std::size_t key = 0; key < n; ++key) {
      const int ia = int((key / stride) % 4);
      const std::size_t base = key - std::size_t(ia) * stride;
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += metric_inv(ia, k) * raised[base + std::size_t(k) * stride];
      tmp[key] = s;
    }
    std::swap(raised, tmp);
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) sq += values[i] * raised[i];
  return std::sqrt(std::max(0.0, sq));
}

}  // namespace weylscope::tensor
