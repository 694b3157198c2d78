// constants.hpp - fixed constants and angle helpers.
//
// Unit conventions used throughout: frequencies and splittings in GHz,
// linewidths in MHz, times in ns, rates in 1/ns, temperatures in K.
// Angles are degrees at every public interface and radians internally.
#pragma once

#include <numbers>

namespace nvpol {

/// k_B/h in GHz per kelvin (CODATA). kT at 4 K is about 83.3 GHz.
inline constexpr double kBoltzmannOverPlanckGHzPerK = 20.836619;

inline constexpr double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / std::numbers::pi); }

}  // namespace nvpol
