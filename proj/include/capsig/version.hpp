#pragma once

namespace capsig {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolkitName = "capsig";

}  // namespace capsig
