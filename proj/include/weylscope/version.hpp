#pragma once

namespace weylscope {

inline constexpr const char* kToolName = "weylscope";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace weylscope
