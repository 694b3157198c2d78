// core_model.hpp - static parameters of the two-branch emitter and the
// thermally activated transition rates between its orbital branches.
#pragma once

#include <array>
#include <cmath>

#include "nvpol/constants.hpp"
#include "nvpol/errors.hpp"

namespace nvpol {

/// Excited-state orbital branch. X is the upper branch, Y the lower one;
/// their optical transition dipoles are orthogonal in the emitter plane.
enum class Branch { X, Y };

inline Branch other_branch(Branch b) { return b == Branch::X ? Branch::Y : Branch::X; }

inline const char* branch_name(Branch b) { return b == Branch::X ? "X" : "Y"; }

/// kT expressed as a frequency in GHz. Throws for non-positive temperature.
inline double thermal_frequency_ghz(double temperature_k) {
  if (!(temperature_k > 0.0))
    throw DomainError("thermal_frequency_ghz: temperature must be > 0 K");
  return kBoltzmannOverPlanckGHzPerK * temperature_k;
}

/// Bath temperature with its precomputed thermal frequency.
struct ThermalBath {
  double temperature_k;
  double thermal_frequency_ghz;  // kT/h, GHz

  explicit ThermalBath(double t_k)
      : temperature_k(t_k), thermal_frequency_ghz(nvpol::thermal_frequency_ghz(t_k)) {}
};

/// Occupation suppression exp(-delta/kT) for a branch splitting of
/// delta_ghz. delta = 0 gives 1 (degenerate branches); negative delta
/// is rejected.
inline double boltzmann_factor(double delta_ghz, const ThermalBath& bath) {
  if (delta_ghz < 0.0)
    throw DomainError("boltzmann_factor: branch splitting must be >= 0 GHz");
  return std::exp(-delta_ghz / bath.thermal_frequency_ghz);
}

/// Phonon-mediated flip rates between the branches, in 1/ns.
/// c_xy populates X from Y (upward), c_yx populates Y from X (downward).
/// gamma keeps the symmetric-limit rate the pair was built from.
struct RateSet {
  double c_xy = 0.0;
  double c_yx = 0.0;
  double gamma = 0.0;
};

/// Detailed balance against the bath: the upward rate is the downward
/// rate suppressed by the Boltzmann factor, c_xy = c_yx * exp(-delta/kT).
/// When kT >> delta both rates approach gamma_down.
inline RateSet rates_from_detailed_balance(double gamma_down_per_ns, double delta_ghz,
                                           const ThermalBath& bath) {
  if (gamma_down_per_ns < 0.0)
    throw DomainError("rates_from_detailed_balance: rate must be >= 0 /ns");
  const double factor = boltzmann_factor(delta_ghz, bath);
  return {gamma_down_per_ns * factor, gamma_down_per_ns, gamma_down_per_ns};
}

/// Equal flip rates in both directions, the kT >> delta limit.
inline RateSet symmetric_rates(double gamma_per_ns) {
  if (gamma_per_ns < 0.0)
    throw DomainError("symmetric_rates: rate must be >= 0 /ns");
  return {gamma_per_ns, gamma_per_ns, gamma_per_ns};
}

/// Fourier-limited Lorentzian FWHM in MHz for a radiative lifetime in ns.
inline double natural_linewidth_mhz(double tau_ns) {
  if (!(tau_ns > 0.0))
    throw DomainError("natural_linewidth_mhz: lifetime must be > 0 ns");
  return 1.0e3 / (2.0 * std::numbers::pi * tau_ns);
}

/// Static description of one emitter. Frequencies are measured from the
/// laser-scan origin given by zpl_detuning_ghz; the X branch sits at
/// +delta/2 and the Y branch at -delta/2 around it. Each branch carries
/// three optical lines offset by the spin sublevels, ordered {Sx, Sy, Sz}.
/// The default offsets are illustrative placeholders, not measured values.
struct LevelModel {
  double delta_ghz = 5.0;           // branch splitting
  double tau_ns = 12.0;             // radiative lifetime
  double zpl_detuning_ghz = 0.0;    // scan origin of the line pattern
  double dipole_x_angle_deg = 0.0;  // in-plane angle of the X dipole
  std::array<double, 3> spin_offsets_x_ghz{-1.2, 0.0, 1.1};
  std::array<double, 3> spin_offsets_y_ghz{-1.0, 0.0, 0.9};
  double linewidth_mhz = 13.262911924324612;  // per-line Lorentzian FWHM

  /// The Y dipole is orthogonal to the X dipole by construction and is
  /// never stored separately.
  double dipole_y_angle_deg() const { return dipole_x_angle_deg + 90.0; }

  double dipole_angle_deg(Branch b) const {
    return b == Branch::X ? dipole_x_angle_deg : dipole_y_angle_deg();
  }

  void validate() const {
    if (!(delta_ghz > 0.0)) throw DomainError("LevelModel: delta_ghz must be > 0");
    if (!(tau_ns > 0.0)) throw DomainError("LevelModel: tau_ns must be > 0");
    if (!(linewidth_mhz > 0.0)) throw DomainError("LevelModel: linewidth_mhz must be > 0");
    if (!std::isfinite(zpl_detuning_ghz) || !std::isfinite(dipole_x_angle_deg))
      throw DomainError("LevelModel: parameters must be finite");
    for (double off : spin_offsets_x_ghz)
      if (!std::isfinite(off)) throw DomainError("LevelModel: spin offsets must be finite");
    for (double off : spin_offsets_y_ghz)
      if (!std::isfinite(off)) throw DomainError("LevelModel: spin offsets must be finite");
  }
};

}  // namespace nvpol
