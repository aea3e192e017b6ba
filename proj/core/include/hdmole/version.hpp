#pragma once

namespace hdmole {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kToolkitName = "hdmole";

}  // namespace hdmole
