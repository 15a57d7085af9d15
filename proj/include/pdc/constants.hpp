#pragma once

#include <numbers>

namespace pdc {

inline constexpr double c_light = 299792458.0;  // m/s
inline constexpr double pi = std::numbers::pi;

}  // namespace pdc
