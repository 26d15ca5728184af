#pragma once

#include <string_view>

namespace ppsim {

inline constexpr std::string_view kToolName = "ppsim";
inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace ppsim
