#pragma once

namespace fmcw {

// Exact SI definition of the speed of light in vacuum (m/s). Every formula
// that involves c takes it as a defaulted parameter so callers can substitute
// the rounded 3e8 value common in textbook worked examples.
inline constexpr double kSpeedOfLight = 299792458.0;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace fmcw
