// random.hpp - deterministic, splittable random streams.
//
// Every stochastic routine in the library draws from a RandomStream
// obtained as stream(seed, stream_id). The mapping from (seed, id) to
// the generator state is fixed here, so a unit of work (a trajectory,
// a detector angle, a scan row) always sees the same draws no matter
// how the surrounding loop is ordered or partitioned. Outputs are
// bit-identical across runs and platforms for a given seed; none of the
// implementation-defined standard <random> distributions are used.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace nvpol {

/// SplitMix64 finalizer; a bijection on 64-bit values.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Stream-id namespaces. Trajectory streams use the raw trajectory
/// index; auxiliary draws are pushed into disjoint id ranges so they
/// can never collide with a trajectory stream under the same seed.
namespace stream_id {
inline constexpr std::uint64_t kDetectionBase = 0x4000000000000000ULL;
inline constexpr std::uint64_t kNoiseBase = 0x8000000000000000ULL;
inline constexpr std::uint64_t kTrialBase = 0xc000000000000000ULL;
}  // namespace stream_id

/// SplitMix64 sequence with counter-based seeding.
class RandomStream {
 public:
  /// Stream `stream_id` of the family identified by `seed`. Distinct
  /// (seed, stream_id) pairs give unrelated sequences.
  static RandomStream stream(std::uint64_t seed, std::uint64_t stream_id) {
    return RandomStream(mix64(mix64(seed) ^ (stream_id + kGoldenGamma)));
  }

  std::uint64_t next_u64() {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Exponential variate with the given mean. Non-finite or
  /// non-positive mean yields +infinity (an event that never happens).
  double exponential(double mean) {
    if (!(mean > 0.0) || !std::isfinite(mean))
      return std::numeric_limits<double>::infinity();
    return -mean * std::log1p(-next_double());
  }

  /// Poisson variate. Sequential cdf search below mean 10, Hormann's
  /// PTRD transformed rejection above; both paths are exact samplers.
  long long poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean < 10.0) return poisson_inversion(mean);
    return poisson_ptrd(mean);
  }

 private:
  explicit RandomStream(std::uint64_t state) : state_(state) {}

  long long poisson_inversion(double mean) {
    double p = std::exp(-mean);
    double cdf = p;
    const double u = next_double();
    long long k = 0;
    while (u > cdf) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      if (k > 2000) break;  // u ~ 1 and the tail underflowed
    }
    return k;
  }

  long long poisson_ptrd(double mean) {
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
      double u;
      double v = next_double();
      if (v <= 0.86 * v_r) {
        u = v / v_r - 0.43;
        return static_cast<long long>(
            std::floor((2.0 * a / (0.5 - std::fabs(u)) + b) * u + mean + 0.445));
      }
      if (v >= v_r) {
        u = next_double() - 0.5;
      } else {
        u = v / v_r - 0.93;
        u = (u < 0.0 ? -0.5 : 0.5) - u;
        v = next_double() * v_r;
      }
      const double us = 0.5 - std::fabs(u);
      if (us < 0.013 && v > us) continue;
      const double k = std::floor((2.0 * a / us + b) * u + mean + 0.445);
      v = v * inv_alpha / (a / (us * us) + b);
      // Exact acceptance test against the log pmf.
      if (k >= 0.0 && std::log(v) <= k * log_mean - mean - std::lgamma(k + 1.0))
        return static_cast<long long>(k);
    }
  }

  std::uint64_t state_;
};

}  // namespace nvpol
