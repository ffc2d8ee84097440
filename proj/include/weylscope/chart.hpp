#pragma once

#include <array>
#include <cmath>
#include <string>

#include "weylscope/errors.hpp"

namespace weylscope {

/// Rectangular coordinate box in R^4.
struct ChartDomain {
  std::array<double, 4> lower{};
  std::array<double, 4> upper{};
  std::string name;

  double extent(int axis) const { return upper[axis] - lower[axis]; }

  void validate() const {
    for (int i = 0; i < 4; ++i) {
      if (!(lower[i] < upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i]))
        throw ValidationError("chart domain '" + name + "': lower[" + std::to_string(i) +
                              "] must be < upper[" + std::to_string(i) + "]");
    }
  }
};

/// A coordinate point; membership/margin checks are done by the operations
/// against their own stencil reach.
struct ChartPoint {
  std::array<double, 4> x{};

  bool finite() const {
    for (double c : x)
      if (!std::isfinite(c)) return false;
    return true;
  }
};

}  // namespace weylscope
