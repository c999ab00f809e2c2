#pragma once

namespace tweedie {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tweedie
