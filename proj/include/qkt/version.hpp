#pragma once

namespace qkt {

inline constexpr const char* kToolName = "qkt";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace qkt
