#pragma once

#include <numbers>

// All energies and rates inside the library are in units of the excited-state
// natural linewidth Gamma, times in 1/Gamma. SI values appear only at the
// reporting boundary through the constants below.
namespace lsiib::units {

inline constexpr double kPi = std::numbers::pi;

// Gamma / (2 pi) for the Rb D lines.
inline constexpr double kGammaHz = 6.0e6;
// Gamma in s^-1.
inline constexpr double kGammaSI = 2.0 * kPi * kGammaHz;

inline constexpr double kSpeedOfLight = 2.99792458e8;     // m/s
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m

inline constexpr double gamma_time_to_seconds(double t) { return t / kGammaSI; }
inline constexpr double seconds_to_gamma_time(double s) { return s * kGammaSI; }
inline constexpr double hz_to_gamma(double hz) { return hz / kGammaHz; }

}  // namespace lsiib::units
