#pragma once

#include <numbers>

namespace ahwarp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kQuarterPi = std::numbers::pi / 4.0;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kSqrt2 = std::numbers::sqrt2;

/// Half-width of the admissible radius interval around pi/4.
inline constexpr double kRadiusHalfWidth = 0.15;
/// Upper end of the default mollification-width grid.
inline constexpr double kEpsGridMax = 0.15;

/// Sign band for the double-zero criterion on W'(0).
inline constexpr double kSignTolerance = 1e-9;

}  // namespace ahwarp
