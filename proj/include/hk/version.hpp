#pragma once

namespace hk {

inline constexpr const char* kToolName = "hksim";
inline constexpr const char* kVersion = "0.1.0";

} // namespace hk
