#pragma once

#include <vector>

#include "weylscope/linalg.hpp"

namespace weylscope::detail {

/// 4th-order central first derivative from samples at -2h,-h,+h,+2h:
///   f'(x) ~ [f(x-2h) - 8 f(x-h) + 8 f(x+h) - f(x+2h)] / (12 h)
inline Mat4 central4(const Mat4& m2, const Mat4& m1, const Mat4& p1, const Mat4& p2, double h) {
  return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
}

inline std::vector<double> central4(const std::vector<double>& m2, const std::vector<double>& m1,
                                    const std::vector<double>& p1, const std::vector<double>& p2,
                                    double h) {
  std::vector<double> out(m2.size());
  const double inv = 1.0 / (12.0 * h);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) * inv;
  return out;
}

}  // namespace weylscope::detail
