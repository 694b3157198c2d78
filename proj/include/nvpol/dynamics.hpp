// dynamics.hpp - branch population dynamics between excitation and
// emission.
//
// The excited emitter hops between the orbital branches with rates
// c_xy (Y -> X) and c_yx (X -> Y):
//
//   dp_x/dt = c_xy p_y - c_yx p_x,   p_x + p_y = 1.
//
// The solution is a single exponential towards p_x = c_xy/(c_xy + c_yx).
// With symmetric rates gamma and the X branch pumped at t = 0,
//
//   p_x(t) = (1 + exp(-2 gamma t)) / 2.
//
// Emission samples these populations; taking <p> at t = tau gives the
// population ratio alpha = tanh(gamma tau) and the polarizer-sweep
// contrast C = (1 - alpha^2)/(1 + alpha^2).
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "nvpol/core_model.hpp"
#include "nvpol/errors.hpp"

namespace nvpol {

/// Branch occupation probabilities at one time point.
struct PopulationState {
  double p_x = 1.0;
  double p_y = 0.0;
  double t_ns = 0.0;
};

inline PopulationState initial_state(Branch pumped) {
  return pumped == Branch::X ? PopulationState{1.0, 0.0, 0.0}
                             : PopulationState{0.0, 1.0, 0.0};
}

namespace detail {

inline void check_population_closure(const PopulationState& s, const char* who) {
  if (s.p_x < -1e-12 || s.p_y < -1e-12 || std::fabs(s.p_x + s.p_y - 1.0) > 1e-12)
    throw DomainError(std::string(who) + ": populations must be in [0,1] and sum to 1");
}

}  // namespace detail

/// Exact propagation of the rate equation for a duration t_ns starting
/// from `initial`. Zero total rate freezes the populations; the steady
/// state is p_x = c_xy/(c_xy + c_yx).
inline PopulationState evolve_general(const RateSet& rates, const PopulationState& initial,
                                      double t_ns) {
  if (!(t_ns >= 0.0)) throw DomainError("evolve_general: duration must be >= 0 ns");
  if (rates.c_xy < 0.0 || rates.c_yx < 0.0)
    throw DomainError("evolve_general: rates must be >= 0 /ns");
  detail::check_population_closure(initial, "evolve_general");
  const double s = rates.c_xy + rates.c_yx;
  if (s <= 0.0) return {initial.p_x, initial.p_y, initial.t_ns + t_ns};
  const double p_inf = rates.c_xy / s;
  const double p_x = p_inf + (initial.p_x - p_inf) * std::exp(-s * t_ns);
  return {p_x, 1.0 - p_x, initial.t_ns + t_ns};
}

/// Symmetric-rate propagation from a freshly pumped branch.
inline PopulationState evolve_symmetric(double gamma_per_ns, Branch pumped, double t_ns) {
  if (gamma_per_ns < 0.0) throw DomainError("evolve_symmetric: rate must be >= 0 /ns");
  if (!(t_ns >= 0.0)) throw DomainError("evolve_symmetric: time must be >= 0 ns");
  const double e = std::exp(-2.0 * gamma_per_ns * t_ns);
  const double hot = 0.5 * (1.0 + e);  // pumped branch
  const double cold = 0.5 * (1.0 - e);
  return pumped == Branch::X ? PopulationState{hot, cold, t_ns}
                             : PopulationState{cold, hot, t_ns};
}

/// Mean branch populations seen by emission and their ratio
/// alpha = min/max (0 = fully polarized emission, 1 = equilibrated).
struct BranchAverages {
  double mean_p_x = 1.0;
  double mean_p_y = 0.0;
  double alpha = 0.0;
  Branch excited_branch = Branch::X;
};

/// Canonical averaging: <p> is taken at the lifetime point t = tau, so
/// alpha = tanh(gamma tau).
inline BranchAverages branch_averages(double gamma_per_ns, double tau_ns, Branch pumped) {
  if (!(tau_ns > 0.0)) throw DomainError("branch_averages: lifetime must be > 0 ns");
  const PopulationState p = evolve_symmetric(gamma_per_ns, pumped, tau_ns);
  return {p.p_x, p.p_y, std::tanh(gamma_per_ns * tau_ns), pumped};
}

/// Alternative averaging over the exponential emission-time density,
/// <p_pumped> = (1 + 1/(1 + 2 gamma tau)) / 2. Opt in explicitly; the
/// lifetime-point average above is the one used everywhere by default.
inline BranchAverages exp_weighted_averages(double gamma_per_ns, double tau_ns, Branch pumped) {
  if (gamma_per_ns < 0.0) throw DomainError("exp_weighted_averages: rate must be >= 0 /ns");
  if (!(tau_ns > 0.0)) throw DomainError("exp_weighted_averages: lifetime must be > 0 ns");
  const double hot = 0.5 * (1.0 + 1.0 / (1.0 + 2.0 * gamma_per_ns * tau_ns));
  const double cold = 1.0 - hot;
  const double alpha = cold / hot;
  return pumped == Branch::X ? BranchAverages{hot, cold, alpha, pumped}
                             : BranchAverages{cold, hot, alpha, pumped};
}

/// Polarizer-sweep contrast for a population ratio alpha in [0,1]:
/// C = (1 - alpha^2)/(1 + alpha^2).
inline double contrast_from_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("contrast_from_alpha: alpha must lie in [0,1]");
  return (1.0 - alpha) * (1.0 + alpha) / (1.0 + alpha * alpha);
}

/// The same contrast evaluated directly from x = gamma*tau as
/// C = 2 exp(-2x) / (1 + exp(-4x)). Algebraically identical to
/// contrast_from_alpha(tanh(x)) but free of the cancellation that
/// loses precision once tanh(x) rounds towards 1.
inline double contrast_from_gamma_tau(double gamma_tau) {
  if (!(gamma_tau >= 0.0))
    throw DomainError("contrast_from_gamma_tau: gamma*tau must be >= 0");
  const double e = std::exp(-2.0 * gamma_tau);
  return 2.0 * e / (1.0 + e * e);
}

/// One row of the contrast-versus-hopping-time table.
struct ContrastTableRow {
  double gamma_inv_ns = 0.0;
  double contrast = 0.0;
  double alpha = 0.0;
};

/// Contrast and alpha on a grid of hopping times 1/gamma at fixed tau.
/// Rows are independent of each other.
inline std::vector<ContrastTableRow> contrast_table(double tau_ns,
                                                    std::span<const double> gamma_inv_ns_grid) {
  if (!(tau_ns > 0.0)) throw DomainError("contrast_table: lifetime must be > 0 ns");
  std::vector<ContrastTableRow> rows;
  rows.reserve(gamma_inv_ns_grid.size());
  for (double g_inv : gamma_inv_ns_grid) {
    if (!(g_inv > 0.0)) throw DomainError("contrast_table: hopping times must be > 0 ns");
    const double x = tau_ns / g_inv;
    rows.push_back({g_inv, contrast_from_gamma_tau(x), std::tanh(x)});
  }
  return rows;
}

/// n logarithmically spaced points covering [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("log_grid: need 0 < lo <= hi");
  if (n < 1) throw DomainError("log_grid: need at least one point");
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    g.push_back(lo);
    return g;
  }
  const double ratio = std::log(hi / lo) / (n - 1);
  for (int k = 0; k < n; ++k) g.push_back(lo * std::exp(ratio * k));
  g.back() = hi;  // pin the endpoint against accumulated rounding
  return g;
}

}  // namespace nvpol
