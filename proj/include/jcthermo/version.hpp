// version.hpp

#pragma once

#include <string_view>

namespace jcthermo {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace jcthermo
