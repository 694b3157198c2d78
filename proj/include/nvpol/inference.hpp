// inference.hpp - cosine-modulation fitting and hopping-rate inversion.
//
// Polarizer sweeps are fitted with linear least squares on the basis
// {1, cos 2theta, sin 2theta} (the modulation period is 180 degrees).
// The fitted contrast sqrt(a1^2 + a2^2)/a0 is then inverted through
// C = (1 - alpha^2)/(1 + alpha^2), alpha = tanh(gamma tau) to estimate
// the branch hopping rate. Uncertainties are first-order (delta method)
// propagations of the coefficient covariance; they degrade near the
// fully polarized (C -> 1) and fully scrambled (C -> 0) ends.
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "nvpol/constants.hpp"
#include "nvpol/errors.hpp"

namespace nvpol {

/// One polarizer-sweep sample.
struct AngleIntensity {
  double angle_deg = 0.0;
  double intensity = 0.0;
};

/// Least-squares result for I(theta) ~ a0 + a1 cos 2theta + a2 sin 2theta.
struct FitResult {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double contrast = 0.0;      // sqrt(a1^2 + a2^2) / a0
  double phase_deg = 0.0;     // angle of maximum transmission, in (-90, 90]
  double residual_rms = 0.0;
  double contrast_sigma = 0.0;
  std::array<std::array<double, 3>, 3> covariance{};  // of (a0, a1, a2)

  /// Noise can push the estimate above the physical bound of 1.
  bool over_unity() const { return contrast > 1.0; }
};

namespace detail {

/// Solves A x = b and fills inv = A^-1 for a symmetric 3x3 system by
/// Gauss-Jordan elimination with partial pivoting. Returns false when a
/// pivot vanishes relative to the matrix scale (rank-deficient design).
inline bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b,
                   std::array<double, 3>& x, std::array<std::array<double, 3>, 3>& inv) {
  std::array<std::array<double, 3>, 3> id{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  if (scale <= 0.0) return false;

  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (std::fabs(a[pivot][col]) < 1e-10 * scale) return false;
    std::swap(a[col], a[pivot]);
    std::swap(id[col], id[pivot]);
    std::swap(b[col], b[pivot]);
    const double d = a[col][col];
    for (int c = 0; c < 3; ++c) {
      a[col][c] /= d;
      id[col][c] /= d;
    }
    b[col] /= d;
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < 3; ++c) {
        a[r][c] -= f * a[col][c];
        id[r][c] -= f * id[col][c];
      }
      b[r] -= f * b[col];
    }
  }
  x = b;
  inv = id;
  return true;
}

}  // namespace detail

/// Fits the three-coefficient cosine model. Needs at least 4 samples
/// whose angles actually separate the basis functions; angle sets that
/// are degenerate (e.g. all congruent modulo 90 degrees) raise DataError,
/// as does a non-positive mean intensity.
inline FitResult fit_cosine(std::span<const AngleIntensity> data) {
  const std::size_t n = data.size();
  if (n < 4) throw DataError("fit_cosine: need at least 4 samples");

  std::array<std::array<double, 3>, 3> xtx{};
  std::array<double, 3> xty{};
  for (const auto& d : data) {
    const double t = 2.0 * deg_to_rad(d.angle_deg);
    const std::array<double, 3> row{1.0, std::cos(t), std::sin(t)};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) xtx[i][j] += row[i] * row[j];
      xty[i] += row[i] * d.intensity;
    }
  }

  std::array<double, 3> coef{};
  std::array<std::array<double, 3>, 3> xtx_inv{};
  if (!detail::solve3(xtx, xty, coef, xtx_inv))
    throw DataError("fit_cosine: degenerate angle sampling, basis not resolvable");

  FitResult fit;
  fit.a0 = coef[0];
  fit.a1 = coef[1];
  fit.a2 = coef[2];
  if (!(fit.a0 > 0.0)) throw DataError("fit_cosine: mean intensity must be positive");

  double rss = 0.0;
  for (const auto& d : data) {
    const double t = 2.0 * deg_to_rad(d.angle_deg);
    const double r = d.intensity - (fit.a0 + fit.a1 * std::cos(t) + fit.a2 * std::sin(t));
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / static_cast<double>(n));
  const double sigma2 = rss / static_cast<double>(n - 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) fit.covariance[i][j] = xtx_inv[i][j] * sigma2;

  const double amp = std::hypot(fit.a1, fit.a2);
  fit.contrast = amp / fit.a0;
  fit.phase_deg = 0.5 * rad_to_deg(std::atan2(fit.a2, fit.a1));

  // Delta method on C = sqrt(a1^2+a2^2)/a0. At amp -> 0 the gradient
  // is singular; fall back to the coefficient scale there.
  if (amp > 0.0) {
    const std::array<double, 3> g{-fit.contrast / fit.a0, fit.a1 / (amp * fit.a0),
                                  fit.a2 / (amp * fit.a0)};
    double var = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) var += g[i] * fit.covariance[i][j] * g[j];
    fit.contrast_sigma = std::sqrt(std::max(var, 0.0));
  } else {
    fit.contrast_sigma =
        std::sqrt(std::max(fit.covariance[1][1], fit.covariance[2][2])) / fit.a0;
  }
  return fit;
}

enum class GammaFlag {
  Ok,
  BelowSensitivity,  // contrast consistent with zero; hopping too fast to resolve
};

/// Hopping-rate estimate inverted from a measured contrast.
struct GammaEstimate {
  double gamma_per_ns = 0.0;
  double gamma_inv_ns = 0.0;
  double alpha = 0.0;
  double ci_low_ns = 0.0;   // 95% interval on gamma_inv
  double ci_high_ns = 0.0;
  GammaFlag flag = GammaFlag::Ok;
};

/// Inverts C = (1 - alpha^2)/(1 + alpha^2) with alpha = tanh(gamma tau).
///
/// Evaluated through e = exp(-2 gamma tau) = C/(1 + sqrt((1-C)(1+C))),
/// which keeps the round trip gamma -> C -> gamma accurate to ~1e-14
/// relative over the whole usable range. C = 1 maps to gamma = 0;
/// C = 0 cannot be inverted and comes back flagged BelowSensitivity
/// with alpha = 1. Contrast outside [0, 1] raises DataError.
inline GammaEstimate invert_contrast(double contrast, double tau_ns,
                                     double contrast_sigma = 0.0) {
  if (!(tau_ns > 0.0)) throw DomainError("invert_contrast: lifetime must be > 0 ns");
  if (!(contrast >= 0.0 && contrast <= 1.0))
    throw DataError("invert_contrast: contrast must lie in [0,1]");
  if (contrast_sigma < 0.0)
    throw DomainError("invert_contrast: contrast_sigma must be >= 0");

  constexpr double inf = std::numeric_limits<double>::infinity();
  GammaEstimate est;
  if (contrast == 0.0) {
    est.gamma_per_ns = inf;
    est.gamma_inv_ns = 0.0;
    est.alpha = 1.0;
    est.flag = GammaFlag::BelowSensitivity;
    return est;
  }

  const double e = contrast / (1.0 + std::sqrt((1.0 - contrast) * (1.0 + contrast)));
  const double x = -0.5 * std::log(e) + 0.0;  // gamma * tau; + 0.0 keeps the C = 1 endpoint at +0
  est.gamma_per_ns = x / tau_ns;
  est.gamma_inv_ns = tau_ns / x;  // +inf when C = 1
  est.alpha = (1.0 - e) / (1.0 + e);

  if (contrast_sigma > 0.0 && x > 0.0 && est.alpha > 0.0) {
    // dgamma/dC = -1 / (2 C tau alpha (1 + C)), then gamma_inv = 1/gamma.
    const double sigma_gamma =
        contrast_sigma / (2.0 * contrast * tau_ns * est.alpha * (1.0 + contrast));
    const double sigma_inv = sigma_gamma / (est.gamma_per_ns * est.gamma_per_ns);
    est.ci_low_ns = std::max(0.0, est.gamma_inv_ns - 1.96 * sigma_inv);
    est.ci_high_ns = est.gamma_inv_ns + 1.96 * sigma_inv;
  } else if (contrast_sigma > 0.0) {
    est.ci_low_ns = 0.0;
    est.ci_high_ns = inf;
  } else {
    est.ci_low_ns = est.gamma_inv_ns;
    est.ci_high_ns = est.gamma_inv_ns;
  }
  return est;
}

/// One labelled sweep dataset for batch processing.
struct BatchItem {
  std::string id;
  std::vector<AngleIntensity> data;
};

/// Per-dataset report row. `flag` is "ok", "fully_unpolarized" (contrast
/// consistent with zero at 2 sigma, hopping time below the few-ns
/// sensitivity floor) or "error: ..." for datasets that could not be
/// processed; failures never abort the rest of the batch.
struct BatchRow {
  std::string id;
  double contrast = 0.0;
  double contrast_sigma = 0.0;
  double gamma_inv_ns = 0.0;
  double ci_low_ns = 0.0;
  double ci_high_ns = 0.0;
  std::string flag = "ok";
};

inline std::vector<BatchRow> batch_report(std::span<const BatchItem> items, double tau_ns) {
  if (!(tau_ns > 0.0)) throw DomainError("batch_report: lifetime must be > 0 ns");
  std::vector<BatchRow> rows;
  rows.reserve(items.size());
  for (const auto& item : items) {
    BatchRow row;
    row.id = item.id;
    try {
      const FitResult fit = fit_cosine(item.data);
      row.contrast = fit.contrast;
      row.contrast_sigma = fit.contrast_sigma;
      // Consistency with zero at 2 sigma (with an absolute floor for
      // noise-free numerical zeros) means the sweep is unmodulated.
      if (fit.contrast <= std::max(2.0 * fit.contrast_sigma, 1e-12)) {
        row.flag = "fully_unpolarized";
      } else {
        const GammaEstimate est = invert_contrast(fit.contrast, tau_ns, fit.contrast_sigma);
        row.gamma_inv_ns = est.gamma_inv_ns;
        row.ci_low_ns = est.ci_low_ns;
        row.ci_high_ns = est.ci_high_ns;
        if (est.flag == GammaFlag::BelowSensitivity) row.flag = "fully_unpolarized";
      }
    } catch (const std::exception& e) {
      row.flag = std::string("error: ") + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace nvpol
