// spectra.hpp - Lorentzian excitation spectra of the six optical lines,
// with dipole-projection weights, slow spectral drift and optional
// Poisson counting noise.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "nvpol/core_model.hpp"
#include "nvpol/errors.hpp"
#include "nvpol/optics.hpp"
#include "nvpol/random.hpp"

namespace nvpol {

/// Spin sublevel labels, in the fixed order used for the offset arrays.
enum class SpinLabel { Sx, Sy, Sz };

inline const char* spin_name(SpinLabel s) {
  switch (s) {
    case SpinLabel::Sx: return "Sx";
    case SpinLabel::Sy: return "Sy";
    default: return "Sz";
  }
}

/// One optical line of the sextet.
struct SpectrumLine {
  double center_ghz = 0.0;
  double fwhm_mhz = 0.0;
  double amplitude = 1.0;
  Branch branch = Branch::X;
  SpinLabel spin = SpinLabel::Sz;

  /// The Sz line of each branch is the one singled out for selective
  /// excitation of that branch.
  bool starred() const { return spin == SpinLabel::Sz; }
};

/// Peak-normalized Lorentzian: 1 at the center, 1/2 at center +- fwhm/2.
inline double lorentzian(double f_ghz, double center_ghz, double fwhm_mhz) {
  const double hw = 0.5 * fwhm_mhz * 1e-3;  // half width in GHz
  const double d = f_ghz - center_ghz;
  return (hw * hw) / (d * d + hw * hw);
}

/// The six lines of the emitter: the Y branch at -delta/2 and the X
/// branch at +delta/2 around the scan origin, each split by its three
/// spin offsets. Amplitudes default to 1 per line; dipole projection is
/// applied at synthesis time, not here.
inline std::vector<SpectrumLine> build_lines(const LevelModel& model) {
  model.validate();
  std::vector<SpectrumLine> lines;
  lines.reserve(6);
  const SpinLabel labels[3] = {SpinLabel::Sx, SpinLabel::Sy, SpinLabel::Sz};
  for (int k = 0; k < 3; ++k)
    lines.push_back({model.zpl_detuning_ghz - 0.5 * model.delta_ghz + model.spin_offsets_y_ghz[k],
                     model.linewidth_mhz, 1.0, Branch::Y, labels[k]});
  for (int k = 0; k < 3; ++k)
    lines.push_back({model.zpl_detuning_ghz + 0.5 * model.delta_ghz + model.spin_offsets_x_ghz[k],
                     model.linewidth_mhz, 1.0, Branch::X, labels[k]});
  return lines;
}

/// The starred (Sz) line of the requested branch.
inline const SpectrumLine& starred_line(std::span<const SpectrumLine> lines, Branch branch) {
  for (const auto& l : lines)
    if (l.branch == branch && l.starred()) return l;
  throw DataError("starred_line: no starred line for the requested branch");
}

/// One frequency sweep. `noise` scales model intensity into expected
/// counts for Poisson sampling (0 keeps the sweep noiseless), and
/// `sweep_index` numbers the sweep within a longer acquisition: line
/// centers are deflected by sweep_index * drift_mhz_per_sweep, constant
/// within the sweep.
struct SweepPlan {
  double f_start_ghz = -5.0;
  double f_stop_ghz = 5.0;
  int n_points = 1001;
  double laser_angle_deg = 0.0;
  double drift_mhz_per_sweep = 0.0;
  double noise = 0.0;
  int sweep_index = 0;

  void validate() const {
    if (!(f_start_ghz < f_stop_ghz)) throw DomainError("SweepPlan: need f_start < f_stop");
    if (n_points < 2) throw DomainError("SweepPlan: need at least 2 points");
    if (noise < 0.0) throw DomainError("SweepPlan: noise must be >= 0");
    if (sweep_index < 0) throw DomainError("SweepPlan: sweep_index must be >= 0");
  }
};

struct SpectrumPoint {
  double freq_ghz = 0.0;
  double counts = 0.0;
};

/// Synthesizes one sweep over the given lines. Each line contributes
/// amplitude * excitation_efficiency(laser, dipole) * Lorentzian. With
/// noise > 0 every bin is an independent Poisson draw from the stream
/// (seed, kNoiseBase + sweep_index), so rows of an acquisition are
/// reproducible regardless of generation order.
inline std::vector<SpectrumPoint> spectrum(const SweepPlan& plan,
                                           std::span<const SpectrumLine> lines,
                                           const LevelModel& model, std::uint64_t seed = 0) {
  plan.validate();
  model.validate();
  const double drift_ghz = plan.sweep_index * plan.drift_mhz_per_sweep * 1e-3;
  std::vector<double> weights;
  weights.reserve(lines.size());
  for (const auto& l : lines) {
    if (!(l.fwhm_mhz > 0.0)) throw DomainError("spectrum: line width must be > 0");
    if (l.amplitude < 0.0) throw DomainError("spectrum: line amplitude must be >= 0");
    weights.push_back(l.amplitude *
                      excitation_efficiency(plan.laser_angle_deg, model.dipole_angle_deg(l.branch)));
  }

  RandomStream rng = RandomStream::stream(
      seed, stream_id::kNoiseBase + static_cast<std::uint64_t>(plan.sweep_index));
  const double df = (plan.f_stop_ghz - plan.f_start_ghz) / (plan.n_points - 1);
  std::vector<SpectrumPoint> out;
  out.reserve(static_cast<std::size_t>(plan.n_points));
  for (int j = 0; j < plan.n_points; ++j) {
    const double f = plan.f_start_ghz + df * j;
    double model_intensity = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k)
      model_intensity += weights[k] * lorentzian(f, lines[k].center_ghz + drift_ghz,
                                                 lines[k].fwhm_mhz);
    double counts = model_intensity;
    if (plan.noise > 0.0)
      counts = static_cast<double>(rng.poisson(plan.noise * model_intensity));
    out.push_back({f, counts});
  }
  return out;
}

/// Accumulated scan: one sweep row per polarizer angle over a single
/// selected line.
struct Accumulation {
  std::vector<double> angles_deg;             // one per row
  std::vector<double> freqs_ghz;              // shared frequency grid
  std::vector<std::vector<double>> counts;    // [row][frequency]
};

/// Repeatedly sweeps the selected line while stepping the excitation
/// polarization. Only that line is synthesized (the scan window tracks
/// it); row r uses laser angle angles_deg[r] and sweep index
/// base.sweep_index + r, so a non-zero drift rate shifts the line
/// linearly down the rows. Needs at least 4 angles for downstream fits.
inline Accumulation polarization_accumulation(const SweepPlan& base,
                                              std::span<const double> angles_deg,
                                              const SpectrumLine& line, const LevelModel& model,
                                              std::uint64_t seed = 0) {
  base.validate();
  if (angles_deg.size() < 4)
    throw DomainError("polarization_accumulation: need at least 4 angles");
  Accumulation acc;
  acc.angles_deg.assign(angles_deg.begin(), angles_deg.end());
  const std::span<const SpectrumLine> one{&line, 1};
  for (std::size_t r = 0; r < angles_deg.size(); ++r) {
    SweepPlan plan = base;
    plan.laser_angle_deg = angles_deg[r];
    plan.sweep_index = base.sweep_index + static_cast<int>(r);
    const auto row = spectrum(plan, one, model, seed);
    if (acc.freqs_ghz.empty()) {
      acc.freqs_ghz.reserve(row.size());
      for (const auto& p : row) acc.freqs_ghz.push_back(p.freq_ghz);
    }
    std::vector<double> counts;
    counts.reserve(row.size());
    for (const auto& p : row) counts.push_back(p.counts);
    acc.counts.push_back(std::move(counts));
  }
  return acc;
}

/// Trapezoidal per-row integrals over frequency, one value per angle.
inline std::vector<double> row_integrals(const Accumulation& acc) {
  std::vector<double> out;
  out.reserve(acc.counts.size());
  for (const auto& row : acc.counts) {
    if (row.size() != acc.freqs_ghz.size())
      throw DataError("row_integrals: ragged accumulation");
    double sum = 0.0;
    for (std::size_t j = 1; j < row.size(); ++j)
      sum += 0.5 * (row[j] + row[j - 1]) * (acc.freqs_ghz[j] - acc.freqs_ghz[j - 1]);
    out.push_back(sum);
  }
  return out;
}

}  // namespace nvpol
