#pragma once

namespace stablesim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stablesim
