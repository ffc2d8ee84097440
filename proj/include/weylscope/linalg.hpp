#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string_view>

namespace weylscope {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Rank-4 covariant tensor on the chart, row-major over (i,j,k,l).
struct Tensor4 {
  std::array<double, 256> v{};

  static constexpr int idx(int i, int j, int k, int l) {
    return ((i * 4 + j) * 4 + k) * 4 + l;
  }
  double& operator()(int i, int j, int k, int l) { return v[idx(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return v[idx(i, j, k, l)]; }

  double max_abs() const {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
  }
};

/// Christoffel symbols Gamma^k_ij, symmetric in (i,j).
struct Christoffel {
  std::array<double, 64> v{};

  static constexpr int idx(int k, int i, int j) { return (k * 4 + i) * 4 + j; }
  double& operator()(int k, int i, int j) { return v[idx(k, i, j)]; }
  double operator()(int k, int i, int j) const { return v[idx(k, i, j)]; }

  double max_abs() const {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
  }
};

/// FNV-1a over bytes; used to fingerprint metric definitions in reports.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace weylscope
