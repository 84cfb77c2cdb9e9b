#pragma once

namespace monofit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace monofit
