// montecarlo.hpp - stochastic sampler for the branch-hopping emitter.
//
// Each trajectory starts in the pumped branch, hops with the configured
// rates and emits after an Exp(tau) waiting time; the photon carries the
// polarization of the branch occupied at emission. Trajectory index k
// draws exclusively from stream(seed, k) - emission time first, then
// successive dwell times - so results are bit-identical for a given
// seed and independent of how the index range is partitioned.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "nvpol/core_model.hpp"
#include "nvpol/errors.hpp"
#include "nvpol/inference.hpp"
#include "nvpol/random.hpp"

namespace nvpol::mc {

struct TrajectorySample {
  double emission_ns = 0.0;
  Branch branch_at_emission = Branch::X;
  int n_flips = 0;
};

struct McConfig {
  long long n_trajectories = 100000;
  std::uint64_t seed = 1;
  RateSet rates{};
  double tau_ns = 12.0;
  Branch initial_branch = Branch::X;

  void validate() const {
    if (n_trajectories < 0) throw DomainError("McConfig: n_trajectories must be >= 0");
    if (!(tau_ns > 0.0)) throw DomainError("McConfig: tau_ns must be > 0");
    if (rates.c_xy < 0.0 || rates.c_yx < 0.0)
      throw DomainError("McConfig: rates must be >= 0");
  }
};

inline TrajectorySample sample_trajectory(const McConfig& cfg, long long index) {
  RandomStream rng = RandomStream::stream(cfg.seed, static_cast<std::uint64_t>(index));
  const double emission = rng.exponential(cfg.tau_ns);
  Branch b = cfg.initial_branch;
  double t = 0.0;
  int flips = 0;
  for (;;) {
    const double out_rate = (b == Branch::X) ? cfg.rates.c_yx : cfg.rates.c_xy;
    if (!(out_rate > 0.0)) break;
    t += rng.exponential(1.0 / out_rate);
    if (t >= emission) break;
    b = other_branch(b);
    ++flips;
  }
  return {emission, b, flips};
}

/// Trajectories [first, last). Concatenating adjacent ranges reproduces
/// a single full run exactly.
inline std::vector<TrajectorySample> simulate_range(const McConfig& cfg, long long first,
                                                    long long last) {
  cfg.validate();
  if (first < 0 || last < first || last > cfg.n_trajectories)
    throw DomainError("simulate_range: bad index range");
  std::vector<TrajectorySample> out;
  out.reserve(static_cast<std::size_t>(last - first));
  for (long long k = first; k < last; ++k) out.push_back(sample_trajectory(cfg, k));
  return out;
}

inline std::vector<TrajectorySample> simulate(const McConfig& cfg) {
  cfg.validate();
  return simulate_range(cfg, 0, cfg.n_trajectories);
}

/// Photon-counting polarizer sweep over the sample ensemble. Each photon
/// is linearly polarized along its branch dipole and passes a polarizer
/// at angle theta with probability cos^2(theta - dipole). Acceptance
/// draws for angle index k come from stream(seed, kDetectionBase + k).
/// Returns the accepted fraction per angle.
inline std::vector<AngleIntensity> empirical_polarizer_sweep(
    std::span<const TrajectorySample> samples, double dipole_x_angle_deg,
    std::span<const double> angles_deg, std::uint64_t seed) {
  if (samples.empty())
    throw DomainError("empirical_polarizer_sweep: need at least one sample");
  std::vector<AngleIntensity> out;
  out.reserve(angles_deg.size());
  for (std::size_t k = 0; k < angles_deg.size(); ++k) {
    RandomStream rng = RandomStream::stream(seed, stream_id::kDetectionBase + k);
    long long accepted = 0;
    for (const auto& s : samples) {
      const double dipole = dipole_x_angle_deg +
                            (s.branch_at_emission == Branch::Y ? 90.0 : 0.0);
      const double c = std::cos(deg_to_rad(angles_deg[k] - dipole));
      if (rng.next_double() < c * c) ++accepted;
    }
    out.push_back({angles_deg[k],
                   static_cast<double>(accepted) / static_cast<double>(samples.size())});
  }
  return out;
}

/// Branch occupation estimate at one time point.
struct OccupationPoint {
  double t_ns = 0.0;
  double p_x_hat = 0.0;
  double sigma = 0.0;  // binomial standard error
};

/// Fraction of trajectories in the X branch at fixed times, with the
/// emission clock ignored (the censored ensemble follows the population
/// solution of the rate equation). times_ns must be ascending.
inline std::vector<OccupationPoint> occupation_curve(const McConfig& cfg,
                                                     std::span<const double> times_ns) {
  cfg.validate();
  if (times_ns.empty()) throw DomainError("occupation_curve: need at least one time");
  for (std::size_t j = 0; j < times_ns.size(); ++j)
    if (!(times_ns[j] >= 0.0) || (j > 0 && times_ns[j] < times_ns[j - 1]))
      throw DomainError("occupation_curve: times must be ascending and >= 0");
  if (cfg.n_trajectories < 1)
    throw DomainError("occupation_curve: need at least one trajectory");

  std::vector<long long> in_x(times_ns.size(), 0);
  for (long long k = 0; k < cfg.n_trajectories; ++k) {
    RandomStream rng = RandomStream::stream(cfg.seed, static_cast<std::uint64_t>(k));
    Branch b = cfg.initial_branch;
    double out_rate = (b == Branch::X) ? cfg.rates.c_yx : cfg.rates.c_xy;
    double t_flip = rng.exponential(out_rate > 0.0 ? 1.0 / out_rate : 0.0);
    for (std::size_t j = 0; j < times_ns.size(); ++j) {
      while (t_flip <= times_ns[j]) {
        b = other_branch(b);
        out_rate = (b == Branch::X) ? cfg.rates.c_yx : cfg.rates.c_xy;
        t_flip += rng.exponential(out_rate > 0.0 ? 1.0 / out_rate : 0.0);
      }
      if (b == Branch::X) ++in_x[j];
    }
  }

  const double n = static_cast<double>(cfg.n_trajectories);
  std::vector<OccupationPoint> out;
  out.reserve(times_ns.size());
  for (std::size_t j = 0; j < times_ns.size(); ++j) {
    const double p = static_cast<double>(in_x[j]) / n;
    out.push_back({times_ns[j], p, std::sqrt(p * (1.0 - p) / n)});
  }
  return out;
}

}  // namespace nvpol::mc
