// optics.hpp - Stokes/Mueller polarization calculus for the two-dipole
// emission and its detection chain.
//
// Conventions, fixed once for the whole library:
//  * angles are degrees, measured counterclockwise from the lab x axis;
//  * Stokes vectors are (i, q, u, v) with q > 0 for x-aligned linear
//    polarization and intensities carried in i (arbitrary units);
//  * a rotated element is the sandwich R(theta) M(0) R(-theta);
//  * retarders advance the fast axis, so with kRetarderVSign = +1 a
//    quarter-wave plate at +45 degrees maps (1, q, 0, 0) to (1, 0, 0, +q).
//
// Emission from the two orthogonal branch dipoles is an incoherent
// mixture: intensity weights are the squared mean branch populations,
// normalized. The resulting sweep intensity is
//
//   I(theta) = <p_x>^2 cos^2(theta - theta_x) + <p_y>^2 sin^2(theta - theta_x)
//
// up to normalization, giving contrast (1 - alpha^2)/(1 + alpha^2).
#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "nvpol/core_model.hpp"
#include "nvpol/dynamics.hpp"
#include "nvpol/errors.hpp"
#include "nvpol/inference.hpp"

namespace nvpol {

/// Sign convention for the circular component produced by retarders.
inline constexpr double kRetarderVSign = 1.0;

struct StokesVector {
  double i = 0.0;
  double q = 0.0;
  double u = 0.0;
  double v = 0.0;

  double degree_of_polarization() const {
    return i > 0.0 ? std::sqrt(q * q + u * u + v * v) / i : 0.0;
  }

  double linear_polarization() const { return i > 0.0 ? std::hypot(q, u) / i : 0.0; }

  /// i >= 0 and q^2+u^2+v^2 <= i^2, with slack for rounding.
  bool is_physical(double tol = 1e-9) const {
    return i >= 0.0 && q * q + u * u + v * v <= i * i * (1.0 + tol);
  }
};

struct MuellerMatrix {
  std::array<std::array<double, 4>, 4> m{};

  static MuellerMatrix identity() {
    MuellerMatrix r;
    for (int k = 0; k < 4; ++k) r.m[k][k] = 1.0;
    return r;
  }

  StokesVector apply(const StokesVector& s) const {
    const std::array<double, 4> in{s.i, s.q, s.u, s.v};
    std::array<double, 4> out{};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) out[r] += m[r][c] * in[c];
    return {out[0], out[1], out[2], out[3]};
  }

  friend MuellerMatrix operator*(const MuellerMatrix& a, const MuellerMatrix& b) {
    MuellerMatrix r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) acc += a.m[i][k] * b.m[k][j];
        r.m[i][j] = acc;
      }
    return r;
  }
};

enum class ElementKind { LinearPolarizer, QuarterWavePlate, Rotation };

/// One element of the detection chain with its precomputed matrix.
struct MuellerElement {
  ElementKind kind = ElementKind::Rotation;
  double angle_deg = 0.0;
  MuellerMatrix matrix = MuellerMatrix::identity();
};

/// Frame rotation by angle_deg (counterclockwise).
inline MuellerElement frame_rotation(double angle_deg) {
  const double c = std::cos(2.0 * deg_to_rad(angle_deg));
  const double s = std::sin(2.0 * deg_to_rad(angle_deg));
  MuellerElement e{ElementKind::Rotation, angle_deg, MuellerMatrix::identity()};
  e.matrix.m[1][1] = c;
  e.matrix.m[1][2] = -s;
  e.matrix.m[2][1] = s;
  e.matrix.m[2][2] = c;
  return e;
}

namespace detail {

inline MuellerMatrix rotated(const MuellerMatrix& m0, double angle_deg) {
  return frame_rotation(angle_deg).matrix * m0 * frame_rotation(-angle_deg).matrix;
}

}  // namespace detail

/// Linear polarizer with its transmission axis at angle_deg. `leak` is
/// the intensity transmittance of the blocked axis; the default 0 is the
/// ideal element.
inline MuellerElement linear_polarizer(double angle_deg, double leak = 0.0) {
  if (leak < 0.0 || leak > 1.0)
    throw DomainError("linear_polarizer: leak must lie in [0,1]");
  const double k1 = 1.0, k2 = leak;
  const double cross = std::sqrt(k1 * k2);
  MuellerMatrix m0{};
  m0.m[0][0] = m0.m[1][1] = 0.5 * (k1 + k2);
  m0.m[0][1] = m0.m[1][0] = 0.5 * (k1 - k2);
  m0.m[2][2] = m0.m[3][3] = cross;
  return {ElementKind::LinearPolarizer, angle_deg, detail::rotated(m0, angle_deg)};
}

/// Wave plate with its fast axis at angle_deg. The default retardance of
/// 90 degrees is the ideal quarter-wave plate; other values model an
/// imperfect element.
inline MuellerElement quarter_wave_plate(double fast_axis_deg, double retardance_deg = 90.0) {
  const double d = deg_to_rad(retardance_deg);
  MuellerMatrix m0 = MuellerMatrix::identity();
  m0.m[2][2] = std::cos(d);
  m0.m[2][3] = kRetarderVSign * std::sin(d);
  m0.m[3][2] = -kRetarderVSign * std::sin(d);
  m0.m[3][3] = std::cos(d);
  return {ElementKind::QuarterWavePlate, fast_axis_deg, detail::rotated(m0, fast_axis_deg)};
}

/// Applies the chain in order (elements[0] first). The input must be a
/// physical Stokes vector.
inline StokesVector propagate(const StokesVector& in, std::span<const MuellerElement> chain) {
  if (!in.is_physical())
    throw DomainError("propagate: input Stokes vector is not physical");
  StokesVector s = in;
  for (const auto& e : chain) s = e.matrix.apply(s);
  return s;
}

/// Malus projection of a pump polarized at laser_angle_deg onto a dipole:
/// cos^2 of the angle between them.
inline double excitation_efficiency(double laser_angle_deg, double dipole_angle_deg) {
  const double c = std::cos(deg_to_rad(laser_angle_deg - dipole_angle_deg));
  return c * c;
}

/// How mean branch populations turn into intensity weights. Squared is
/// the model's emission law and the default everywhere; Linear weighs by
/// the populations themselves and exists only as an explicit alternative.
enum class PopulationWeighting { Squared, Linear };

/// Incoherent two-dipole source: normalized intensity weights plus the
/// X dipole orientation.
struct EmissionMixture {
  double weight_x = 1.0;
  double weight_y = 0.0;
  double dipole_x_angle_deg = 0.0;
};

inline EmissionMixture emission_mixture(const BranchAverages& avg, const LevelModel& model,
                                        PopulationWeighting weighting = PopulationWeighting::Squared) {
  double wx, wy;
  if (weighting == PopulationWeighting::Squared) {
    wx = avg.mean_p_x * avg.mean_p_x;
    wy = avg.mean_p_y * avg.mean_p_y;
  } else {
    wx = avg.mean_p_x;
    wy = avg.mean_p_y;
  }
  const double norm = wx + wy;
  if (!(norm > 0.0)) throw DomainError("emission_mixture: weights vanish");
  return {wx / norm, wy / norm, model.dipole_x_angle_deg};
}

/// Stokes vector of the mixture, normalized to unit intensity. In the
/// dipole frame q = weight_x - weight_y; the lab-frame vector is that
/// rotated to the X dipole angle. v = 0: an incoherent mixture of two
/// linear dipoles carries no circular component.
inline StokesVector mixture_to_stokes(const EmissionMixture& mix) {
  if (mix.weight_x < 0.0 || mix.weight_y < 0.0)
    throw DomainError("mixture_to_stokes: weights must be >= 0");
  const double norm = mix.weight_x + mix.weight_y;
  if (!(norm > 0.0)) throw DomainError("mixture_to_stokes: weights vanish");
  const double q0 = (mix.weight_x - mix.weight_y) / norm;
  const double two_a = 2.0 * deg_to_rad(mix.dipole_x_angle_deg);
  return {1.0, q0 * std::cos(two_a), q0 * std::sin(two_a), 0.0};
}

/// Detected intensity versus polarizer angle, optionally behind a fixed
/// quarter-wave plate. Needs at least 4 distinct angles so the result
/// can feed the cosine fit.
inline std::vector<AngleIntensity> polarizer_sweep(const StokesVector& source,
                                                   std::optional<double> qwp_angle_deg,
                                                   std::span<const double> angles_deg) {
  std::vector<double> distinct;
  for (double a : angles_deg) {
    bool seen = false;
    for (double d : distinct) seen = seen || d == a;
    if (!seen) distinct.push_back(a);
  }
  if (distinct.size() < 4)
    throw DomainError("polarizer_sweep: need at least 4 distinct angles");
  if (!source.is_physical())
    throw DomainError("polarizer_sweep: source Stokes vector is not physical");

  StokesVector s = source;
  if (qwp_angle_deg) s = quarter_wave_plate(*qwp_angle_deg).matrix.apply(s);

  std::vector<AngleIntensity> out;
  out.reserve(angles_deg.size());
  for (double a : angles_deg)
    out.push_back({a, linear_polarizer(a).matrix.apply(s).i});
  return out;
}

/// One point of a quarter-wave-plate scan.
struct QwpScanPoint {
  double qwp_deg = 0.0;
  double contrast = 0.0;
};

namespace detail {

inline std::vector<double> uniform_angles(int n, double period_deg) {
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) a.push_back(period_deg * k / n);
  return a;
}

}  // namespace detail

/// Fitted sweep contrast for each quarter-wave-plate angle. Contrast is
/// always obtained from the cosine fit of a full polarizer sweep (36
/// uniform angles by default), never from raw minima and maxima. For an
/// incoherent mixture no plate angle beats the plain degree of
/// polarization; for coherent elliptical light the right plate angle
/// recovers contrast 1.
inline std::vector<QwpScanPoint> qwp_contrast_scan(const StokesVector& source,
                                                   std::span<const double> qwp_angles_deg,
                                                   int polarizer_points = 36) {
  if (polarizer_points < 4)
    throw DomainError("qwp_contrast_scan: need at least 4 polarizer angles");
  if (!source.is_physical())
    throw DomainError("qwp_contrast_scan: source Stokes vector is not physical");
  const std::vector<double> angles = detail::uniform_angles(polarizer_points, 180.0);
  std::vector<QwpScanPoint> out;
  out.reserve(qwp_angles_deg.size());
  for (double qwp : qwp_angles_deg) {
    const auto sweep = polarizer_sweep(source, qwp, angles);
    out.push_back({qwp, fit_cosine(sweep).contrast});
  }
  return out;
}

}  // namespace nvpol
