#include "doctest.h"

#include <cmath>

#include "nvpol/dynamics.hpp"
#include "nvpol/random.hpp"
#include "oracles.hpp"

using namespace nvpol;

TEST_CASE("symmetric evolution from a pumped branch") {
  // gamma = 0.05 /ns, t = 12 ns: p = (1 + exp(-1.2))/2
  const PopulationState p = evolve_symmetric(0.05, Branch::X, 12.0);
  CHECK(p.p_x == doctest::Approx(0.650597105956101).epsilon(1e-12));
  CHECK(p.p_y == doctest::Approx(0.349402894043899).epsilon(1e-12));
  CHECK(p.t_ns == 12.0);

  SUBCASE("t = 0 keeps the pumped branch exactly") {
    const PopulationState q = evolve_symmetric(0.05, Branch::X, 0.0);
    CHECK(q.p_x == 1.0);
    CHECK(q.p_y == 0.0);
  }
  SUBCASE("gamma = 0 freezes the populations") {
    const PopulationState q = evolve_symmetric(0.0, Branch::X, 500.0);
    CHECK(q.p_x == 1.0);
  }
  SUBCASE("long times equilibrate to 1/2") {
    const PopulationState q = evolve_symmetric(0.05, Branch::X, 1e6);
    CHECK(q.p_x == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("pumping Y mirrors pumping X") {
    const PopulationState qx = evolve_symmetric(0.05, Branch::X, 7.0);
    const PopulationState qy = evolve_symmetric(0.05, Branch::Y, 7.0);
    CHECK(qx.p_x == qy.p_y);
    CHECK(qx.p_y == qy.p_x);
  }
  CHECK_THROWS_AS(evolve_symmetric(-0.1, Branch::X, 1.0), DomainError);
  CHECK_THROWS_AS(evolve_symmetric(0.1, Branch::X, -1.0), DomainError);
}

TEST_CASE("general evolution agrees with the symmetric closed form") {
  RandomStream rng = RandomStream::stream(201, 0);
  for (int k = 0; k < 200; ++k) {
    const double g = rng.next_double();
    const double t = 100.0 * rng.next_double();
    const PopulationState a = evolve_general(symmetric_rates(g), initial_state(Branch::X), t);
    const PopulationState b = evolve_symmetric(g, Branch::X, t);
    CHECK(std::fabs(a.p_x - b.p_x) <= 1e-12);
  }
}

TEST_CASE("general evolution matches an independent RK4 integration") {
  const double cases[][2] = {{0.05, 0.05}, {0.04708867219376169, 0.05}, {0.2, 0.03}};
  for (const auto& c : cases) {
    const RateSet rates{c[0], c[1], 0.0};
    for (double t : {1.0, 7.0, 30.0}) {
      const double expected = oracle::rk4_population(c[0], c[1], 1.0, t, 20000);
      const PopulationState p = evolve_general(rates, initial_state(Branch::X), t);
      CHECK(p.p_x == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("general evolution: steady state and edge cases") {
  const ThermalBath bath(4.0);
  const RateSet rates = rates_from_detailed_balance(0.05, 5.0, bath);

  SUBCASE("long-time limit is c_xy / (c_xy + c_yx)") {
    const double t = 50.0 / std::max(rates.c_xy, rates.c_yx);
    const PopulationState p = evolve_general(rates, initial_state(Branch::X), t);
    CHECK(p.p_x == doctest::Approx(0.485006861560388).epsilon(1e-9));
    CHECK(p.p_x == doctest::Approx(rates.c_xy / (rates.c_xy + rates.c_yx)).epsilon(1e-9));
  }

  SUBCASE("zero rates freeze an arbitrary state") {
    const PopulationState start{0.3, 0.7, 2.0};
    const PopulationState p = evolve_general(RateSet{}, start, 40.0);
    CHECK(p.p_x == 0.3);
    CHECK(p.t_ns == 42.0);
  }

  SUBCASE("closure is preserved") {
    RandomStream rng = RandomStream::stream(202, 0);
    for (int k = 0; k < 200; ++k) {
      const RateSet r{0.5 * rng.next_double(), 0.5 * rng.next_double(), 0.0};
      const double px0 = rng.next_double();
      const PopulationState p =
          evolve_general(r, PopulationState{px0, 1.0 - px0, 0.0}, 200.0 * rng.next_double());
      CHECK(std::fabs(p.p_x + p.p_y - 1.0) <= 1e-12);
      CHECK(p.p_x >= 0.0);
      CHECK(p.p_x <= 1.0);
    }
  }

  CHECK_THROWS_AS(evolve_general(rates, initial_state(Branch::X), -1.0), DomainError);
  CHECK_THROWS_AS(evolve_general(RateSet{-0.1, 0.1, 0.0}, initial_state(Branch::X), 1.0),
                  DomainError);
  CHECK_THROWS_AS(evolve_general(rates, PopulationState{0.7, 0.7, 0.0}, 1.0), DomainError);
}

TEST_CASE("branch averages at the lifetime point") {
  const BranchAverages avg = branch_averages(0.05, 12.0, Branch::X);
  CHECK(avg.mean_p_x == doctest::Approx(0.650597105956101).epsilon(1e-12));
  CHECK(avg.mean_p_y == doctest::Approx(0.349402894043899).epsilon(1e-12));
  CHECK(avg.alpha == doctest::Approx(0.537049566998035).epsilon(1e-12));
  CHECK(avg.excited_branch == Branch::X);

  SUBCASE("alpha equals the min/max population ratio") {
    RandomStream rng = RandomStream::stream(203, 0);
    for (int k = 0; k < 100; ++k) {
      const double g = 0.3 * rng.next_double();
      const BranchAverages a = branch_averages(g, 12.0, Branch::X);
      const double lo = std::min(a.mean_p_x, a.mean_p_y);
      const double hi = std::max(a.mean_p_x, a.mean_p_y);
      CHECK(a.alpha == doctest::Approx(lo / hi).epsilon(1e-12));
    }
  }

  SUBCASE("pumping Y swaps the means, alpha unchanged") {
    const BranchAverages ay = branch_averages(0.05, 12.0, Branch::Y);
    CHECK(ay.mean_p_y == avg.mean_p_x);
    CHECK(ay.mean_p_x == avg.mean_p_y);
    CHECK(ay.alpha == avg.alpha);
  }

  SUBCASE("slow hopping: fully polarized limit") {
    const BranchAverages a = branch_averages(0.0, 12.0, Branch::X);
    CHECK(a.alpha == 0.0);
    CHECK(a.mean_p_x == 1.0);
  }

  SUBCASE("fast hopping saturates alpha") {
    const BranchAverages a = branch_averages(1.0 / 3.0, 12.0, Branch::X);
    CHECK(a.alpha == doctest::Approx(0.999329299739067).epsilon(1e-12));
  }

  CHECK_THROWS_AS(branch_averages(0.05, 0.0, Branch::X), DomainError);
}

TEST_CASE("exponential-density averaging is a distinct, opt-in weighting") {
  const BranchAverages avg = exp_weighted_averages(0.05, 12.0, Branch::X);
  // (1 + 1/(1 + 2*0.6))/2 = 8/11
  CHECK(avg.mean_p_x == doctest::Approx(0.727272727272727).epsilon(1e-12));
  CHECK(avg.mean_p_y == doctest::Approx(0.272727272727273).epsilon(1e-12));
  CHECK(avg.alpha == doctest::Approx(0.375).epsilon(1e-12));

  SUBCASE("quadrature oracle over the emission density") {
    const double tau = 12.0, g = 0.05;
    const double integral = oracle::simpson(
        [&](double t) {
          return evolve_symmetric(g, Branch::X, t).p_x * std::exp(-t / tau) / tau;
        },
        0.0, 40.0 * tau, 40000);
    CHECK(avg.mean_p_x == doctest::Approx(integral).epsilon(1e-9));
  }

  SUBCASE("no hopping keeps the pumped branch") {
    const BranchAverages a = exp_weighted_averages(0.0, 12.0, Branch::X);
    CHECK(a.mean_p_x == 1.0);
    CHECK(a.alpha == 0.0);
  }

  SUBCASE("differs from the lifetime-point average") {
    const BranchAverages lifetime = branch_averages(0.05, 12.0, Branch::X);
    CHECK(std::fabs(avg.mean_p_x - lifetime.mean_p_x) > 0.05);
  }
}

TEST_CASE("contrast from the population ratio") {
  CHECK(contrast_from_alpha(0.0) == 1.0);
  CHECK(contrast_from_alpha(1.0) == 0.0);
  CHECK(contrast_from_alpha(0.537049566998035) ==
        doctest::Approx(0.552286154278205).epsilon(1e-12));
  // the 6-digit rounded ratio gives a visibly different 7th digit
  CHECK(contrast_from_alpha(0.537050) == doctest::Approx(0.552285593943110).epsilon(1e-12));
  CHECK_THROWS_AS(contrast_from_alpha(-0.1), DomainError);
  CHECK_THROWS_AS(contrast_from_alpha(1.1), DomainError);
  CHECK_THROWS_AS(contrast_from_alpha(std::nan("")), DomainError);

  SUBCASE("strictly decreasing in alpha") {
    RandomStream rng = RandomStream::stream(204, 0);
    for (int k = 0; k < 200; ++k) {
      const double a1 = rng.next_double();
      const double a2 = a1 + (1.0 - a1) * (0.01 + 0.99 * rng.next_double());
      CHECK(contrast_from_alpha(a2) < contrast_from_alpha(a1));
    }
  }
}

TEST_CASE("contrast from gamma*tau matches the alpha route") {
  CHECK(contrast_from_gamma_tau(0.0) == 1.0);
  CHECK(contrast_from_gamma_tau(0.6) == doctest::Approx(0.552286154278205).epsilon(1e-12));
  CHECK(contrast_from_gamma_tau(4.0) == doctest::Approx(6.70925180302341e-4).epsilon(1e-12));
  CHECK(contrast_from_gamma_tau(1000.0) == 0.0);
  CHECK_THROWS_AS(contrast_from_gamma_tau(-0.5), DomainError);

  RandomStream rng = RandomStream::stream(205, 0);
  for (int k = 0; k < 200; ++k) {
    const double x = 8.0 * rng.next_double();
    CHECK(std::fabs(contrast_from_gamma_tau(x) - contrast_from_alpha(std::tanh(x))) <= 1e-12);
  }
}

TEST_CASE("contrast table freezes the headline values") {
  const double grid[] = {3.0, 20.0, 1000.0, 1e6};
  const auto rows = contrast_table(12.0, grid);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].contrast == doctest::Approx(6.70925180302341e-4).epsilon(1e-12));
  CHECK(rows[0].alpha == doctest::Approx(0.999329299739067).epsilon(1e-12));
  CHECK(rows[1].contrast == doctest::Approx(0.552286154278205).epsilon(1e-12));
  CHECK(rows[1].alpha == doctest::Approx(0.537049566998035).epsilon(1e-12));
  CHECK(rows[2].contrast == doctest::Approx(0.999712069103813).epsilon(1e-12));
  CHECK(rows[3].contrast > 0.9999);

  CHECK_THROWS_AS(contrast_table(0.0, grid), DomainError);
  const double bad[] = {3.0, 0.0};
  CHECK_THROWS_AS(contrast_table(12.0, bad), DomainError);
}

TEST_CASE("contrast table is strictly monotone on a log grid") {
  const auto grid = log_grid(1.0, 1000.0, 200);
  const auto rows = contrast_table(12.0, grid);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].contrast > rows[k - 1].contrast);
    CHECK(rows[k].alpha < rows[k - 1].alpha);
  }
}

TEST_CASE("log grid construction") {
  const auto g = log_grid(1.0, 1000.0, 4);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == 1.0);
  CHECK(g[1] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(g[2] == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(g[3] == 1000.0);

  const auto single = log_grid(5.0, 100.0, 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == 5.0);

  CHECK_THROWS_AS(log_grid(0.0, 10.0, 5), DomainError);
  CHECK_THROWS_AS(log_grid(10.0, 1.0, 5), DomainError);
  CHECK_THROWS_AS(log_grid(1.0, 10.0, 0), DomainError);
}
