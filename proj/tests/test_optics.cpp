#include "doctest.h"

#include <cmath>
#include <vector>

#include "nvpol/dynamics.hpp"
#include "nvpol/optics.hpp"
#include "nvpol/random.hpp"

using namespace nvpol;

TEST_CASE("excitation efficiency is a Malus projection") {
  CHECK(excitation_efficiency(30.0, 30.0) == 1.0);
  CHECK(excitation_efficiency(0.0, 90.0) <= 1e-30);
  CHECK(excitation_efficiency(0.0, 45.0) == doctest::Approx(0.5).epsilon(1e-12));

  RandomStream rng = RandomStream::stream(401, 0);
  for (int k = 0; k < 100; ++k) {
    const double laser = 360.0 * rng.next_double();
    const double dipole = 360.0 * rng.next_double();
    const double e = excitation_efficiency(laser, dipole);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
    CHECK(e + excitation_efficiency(laser, dipole + 90.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(excitation_efficiency(laser + 180.0, dipole) == doctest::Approx(e).epsilon(1e-9));
  }
}

TEST_CASE("emission mixture weights at the lifetime point") {
  const LevelModel model;
  const BranchAverages avg = branch_averages(0.05, 12.0, Branch::X);

  const EmissionMixture squared = emission_mixture(avg, model);
  CHECK(squared.weight_x == doctest::Approx(0.776143077139102).epsilon(1e-12));
  CHECK(squared.weight_y == doctest::Approx(0.223856922860898).epsilon(1e-12));
  CHECK(squared.weight_x + squared.weight_y == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(squared.dipole_x_angle_deg == 0.0);

  const EmissionMixture linear = emission_mixture(avg, model, PopulationWeighting::Linear);
  CHECK(linear.weight_x == doctest::Approx(0.650597105956101).epsilon(1e-12));

  const BranchAverages dead{0.0, 0.0, 1.0, Branch::X};
  CHECK_THROWS_AS(emission_mixture(dead, model), DomainError);
}

TEST_CASE("mixture Stokes vector carries the branch imbalance") {
  const LevelModel model;
  const BranchAverages avg = branch_averages(0.05, 12.0, Branch::X);
  const StokesVector s = mixture_to_stokes(emission_mixture(avg, model));
  CHECK(s.i == 1.0);
  CHECK(s.q == doctest::Approx(0.552286154278205).epsilon(1e-12));
  CHECK(s.u == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.v == 0.0);
  CHECK(s.degree_of_polarization() ==
        doctest::Approx(contrast_from_gamma_tau(0.6)).epsilon(1e-12));
  CHECK(s.is_physical());

  SUBCASE("a 45 degree dipole moves q into u") {
    LevelModel tilted = model;
    tilted.dipole_x_angle_deg = 45.0;
    const StokesVector t = mixture_to_stokes(emission_mixture(avg, tilted));
    CHECK(t.q == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(t.u == doctest::Approx(0.552286154278205).epsilon(1e-12));
  }

  SUBCASE("balanced weights give unpolarized light") {
    const StokesVector t = mixture_to_stokes({0.5, 0.5, 20.0});
    CHECK(t.q == 0.0);
    CHECK(t.u == 0.0);
    CHECK(t.degree_of_polarization() == 0.0);
  }

  CHECK_THROWS_AS(mixture_to_stokes({-0.1, 1.1, 0.0}), DomainError);
  CHECK_THROWS_AS(mixture_to_stokes({0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("ideal polarizer behaves like its textbook matrix") {
  SUBCASE("halves unpolarized light") {
    const StokesVector out = linear_polarizer(0.0).matrix.apply({1, 0, 0, 0});
    CHECK(out.i == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(out.q == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(out.u == doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("Malus law on fully polarized input") {
    RandomStream rng = RandomStream::stream(402, 0);
    for (int k = 0; k < 100; ++k) {
      const double axis = 180.0 * rng.next_double();
      const double pol = 180.0 * rng.next_double();
      const double two_p = 2.0 * deg_to_rad(pol);
      const StokesVector in{1.0, std::cos(two_p), std::sin(two_p), 0.0};
      const double out = linear_polarizer(axis).matrix.apply(in).i;
      CHECK(out == doctest::Approx(excitation_efficiency(axis, pol)).epsilon(1e-9));
    }
  }

  SUBCASE("rotated matrix equals the closed form") {
    RandomStream rng = RandomStream::stream(403, 0);
    for (int k = 0; k < 50; ++k) {
      const double axis = 360.0 * rng.next_double() - 180.0;
      const double c = std::cos(2.0 * deg_to_rad(axis));
      const double s = std::sin(2.0 * deg_to_rad(axis));
      const double expected[4][4] = {{1, c, s, 0},
                                     {c, c * c, c * s, 0},
                                     {s, c * s, s * s, 0},
                                     {0, 0, 0, 0}};
      const MuellerMatrix got = linear_polarizer(axis).matrix;
      for (int r = 0; r < 4; ++r)
        for (int col = 0; col < 4; ++col)
          CHECK(got.m[r][col] == doctest::Approx(0.5 * expected[r][col]).epsilon(1e-12));
    }
  }

  SUBCASE("leak interpolates towards a neutral element") {
    const MuellerMatrix full = linear_polarizer(37.0, 1.0).matrix;
    const MuellerMatrix id = MuellerMatrix::identity();
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) CHECK(full.m[r][c] == doctest::Approx(id.m[r][c]).epsilon(1e-12));

    const StokesVector out = linear_polarizer(0.0, 0.01).matrix.apply({1, 0, 0, 0});
    CHECK(out.i == doctest::Approx(0.505).epsilon(1e-12));
  }

  CHECK_THROWS_AS(linear_polarizer(0.0, -0.1), DomainError);
  CHECK_THROWS_AS(linear_polarizer(0.0, 1.7), DomainError);
}

TEST_CASE("wave plate conventions") {
  SUBCASE("fast axis along the polarization leaves it alone") {
    const StokesVector in{1.0, 0.7, 0.0, 0.0};
    const StokesVector out = quarter_wave_plate(0.0).matrix.apply(in);
    CHECK(out.q == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(out.u == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(out.v == doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("plate at 45 degrees converts q into +v") {
    const StokesVector out = quarter_wave_plate(45.0).matrix.apply({1.0, 0.7, 0.0, 0.0});
    CHECK(out.i == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.q == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.u == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.v == doctest::Approx(kRetarderVSign * 0.7).epsilon(1e-12));
  }

  SUBCASE("half-wave retardance at 45 degrees flips q") {
    const StokesVector out =
        quarter_wave_plate(45.0, 180.0).matrix.apply({1.0, 0.7, 0.0, 0.0});
    CHECK(out.q == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(std::fabs(out.v) <= 1e-12);
  }

  SUBCASE("retarders and rotations preserve the polarization degree") {
    RandomStream rng = RandomStream::stream(404, 0);
    for (int k = 0; k < 50; ++k) {
      StokesVector s{1.0, 0.0, 0.0, 0.0};
      const double p = rng.next_double();
      const double two_a = 2.0 * deg_to_rad(180.0 * rng.next_double());
      s.q = p * std::cos(two_a);
      s.u = p * std::sin(two_a);
      const std::vector<MuellerElement> chain{
          quarter_wave_plate(360.0 * rng.next_double()),
          frame_rotation(360.0 * rng.next_double()),
          quarter_wave_plate(360.0 * rng.next_double(), 360.0 * rng.next_double()),
      };
      const StokesVector out = propagate(s, chain);
      CHECK(out.degree_of_polarization() == doctest::Approx(p).epsilon(1e-12));
      CHECK(out.i == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(propagate({1.0, 1.5, 0.0, 0.0}, std::vector<MuellerElement>{}),
                  DomainError);
}

TEST_CASE("polarizer sweep of the branch mixture") {
  const LevelModel model;
  const BranchAverages avg = branch_averages(0.05, 12.0, Branch::X);
  const StokesVector source = mixture_to_stokes(emission_mixture(avg, model));
  const std::vector<double> angles = [] {
    std::vector<double> a;
    for (int k = 0; k < 36; ++k) a.push_back(5.0 * k);
    return a;
  }();

  const auto sweep = polarizer_sweep(source, std::nullopt, angles);
  REQUIRE(sweep.size() == 36);
  CHECK(sweep[0].intensity == doctest::Approx(0.776143077139102).epsilon(1e-12));
  CHECK(sweep[18].intensity == doctest::Approx(0.223856922860898).epsilon(1e-12));
  CHECK(sweep[9].intensity == doctest::Approx(0.5).epsilon(1e-12));

  const FitResult fit = fit_cosine(sweep);
  CHECK(fit.residual_rms <= 1e-12);
  CHECK(fit.contrast == doctest::Approx(0.552286154278205).epsilon(1e-12));
  CHECK(fit.phase_deg == doctest::Approx(0.0).epsilon(1e-9));

  SUBCASE("frozen branches give a pure Malus sweep") {
    const BranchAverages still = branch_averages(0.0, 12.0, Branch::X);
    const StokesVector s = mixture_to_stokes(emission_mixture(still, model));
    const auto pure = polarizer_sweep(s, std::nullopt, angles);
    for (const auto& p : pure) {
      const double c = std::cos(deg_to_rad(p.angle_deg));
      CHECK(p.intensity == doctest::Approx(c * c).epsilon(1e-9));
    }
    CHECK(fit_cosine(pure).contrast == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("too few distinct angles are rejected") {
    const std::vector<double> narrow{0.0, 45.0, 45.0, 0.0};
    CHECK_THROWS_AS(polarizer_sweep(source, std::nullopt, narrow), DomainError);
  }
}

TEST_CASE("wave-plate scans separate mixtures from coherent ellipses") {
  const double c0 = contrast_from_gamma_tau(0.6);

  SUBCASE("plate aligned with the mixture axis reports the polarization degree") {
    const StokesVector mix{1.0, c0, 0.0, 0.0};
    const auto at0 = qwp_contrast_scan(mix, std::vector<double>{0.0});
    REQUIRE(at0.size() == 1);
    CHECK(at0[0].contrast == doctest::Approx(c0).epsilon(1e-9));

    const auto at45 = qwp_contrast_scan(mix, std::vector<double>{45.0});
    CHECK(at45[0].contrast <= 1e-9);
  }

  SUBCASE("scan maximum over a 1 degree grid equals the polarization degree") {
    const double axis = 30.0;
    const double two_a = 2.0 * deg_to_rad(axis);
    const StokesVector mix{1.0, c0 * std::cos(two_a), c0 * std::sin(two_a), 0.0};
    std::vector<double> grid;
    for (int k = 0; k < 180; ++k) grid.push_back(static_cast<double>(k));
    double best = 0.0;
    for (const auto& p : qwp_contrast_scan(mix, grid)) best = std::max(best, p.contrast);
    CHECK(best == doctest::Approx(mix.degree_of_polarization()).epsilon(1e-9));
    CHECK(best < 0.999);
  }

  SUBCASE("a coherent ellipse is rectified to full contrast") {
    const double circ = std::sqrt(1.0 - c0 * c0);
    CHECK(circ == doctest::Approx(0.833654607012155).epsilon(1e-12));
    const StokesVector ellipse{1.0, c0, 0.0, circ};
    std::vector<double> grid;
    for (int k = 0; k < 180; ++k) grid.push_back(static_cast<double>(k));
    double best = 0.0;
    for (const auto& p : qwp_contrast_scan(ellipse, grid)) best = std::max(best, p.contrast);
    CHECK(best == doctest::Approx(1.0).epsilon(1e-9));
  }

  CHECK_THROWS_AS(qwp_contrast_scan({1, 0, 0, 0}, std::vector<double>{0.0}, 3), DomainError);
  CHECK_THROWS_AS(qwp_contrast_scan({1, 2, 0, 0}, std::vector<double>{0.0}), DomainError);
}
