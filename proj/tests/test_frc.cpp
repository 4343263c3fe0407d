#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "frcuc/frc.hpp"

using namespace frcuc;

namespace {

std::vector<double> alpha30(std::size_t n) { return std::vector<double>(n, 30.0); }

}  // namespace

TEST_CASE("requirements reproduce the three desk-system forecast blocks") {
  // block solved at t=1
  auto r1 = compute_requirements({{690, 660, 640, 620}, true}, alpha30(3));
  CHECK(r1.upward == std::vector<double>{0, 10, 10});
  CHECK(r1.downward == std::vector<double>{60, 50, 50});
  // block solved at t=2
  auto r2 = compute_requirements({{660, 640, 620, 590}, true}, alpha30(3));
  CHECK(r2.upward == std::vector<double>{10, 10, 0});
  CHECK(r2.downward == std::vector<double>{50, 50, 60});
  // block solved at t=3 (first entry realized)
  auto r3 = compute_requirements({{665, 620, 590, 570}, true}, alpha30(3));
  CHECK(r3.upward == std::vector<double>{0, 0, 10});
  CHECK(r3.downward == std::vector<double>{75, 60, 50});
}

TEST_CASE("constant net load with zero adder needs no capability") {
  auto r = compute_requirements({{500, 500, 500, 500}, false},
                                std::vector<double>(3, 0.0));
  for (double v : r.upward) CHECK(v == 0.0);
  for (double v : r.downward) CHECK(v == 0.0);
}

TEST_CASE("requirement series length checks") {
  CHECK_THROWS_AS(compute_requirements({{1.0}, false}, alpha30(1)), InvariantError);
  CHECK_THROWS_AS(compute_requirements({{1, 2, 3}, false}, alpha30(1)), InvariantError);
}

TEST_CASE("alpha from the sigma model") {
  SECTION("zero multiplier") {
    auto a = compute_alpha({4920, 3960}, 3000, 0.0);
    CHECK(a == std::vector<double>{0, 0});
  }
  SECTION("quadrature of demand and wind terms") {
    auto a = compute_alpha({4920}, 3000, 3.0);
    CHECK(a[0] == Catch::Approx(389.1).margin(0.1));
  }
  SECTION("single-term reduction") {
    auto a = compute_alpha({4920, 100}, 3000, 1.0, 0.01, 0.0);
    CHECK(a[0] == Catch::Approx(49.2).margin(1e-9));
    CHECK(a[1] == Catch::Approx(1.0).margin(1e-9));
  }
  SECTION("negative fractions rejected") {
    CHECK_THROWS_AS(compute_alpha({1}, 1, 1, -0.1), InvariantError);
  }
}

TEST_CASE("requirement identities and monotonicity over random series") {
  std::mt19937_64 rng(42);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * (1.0 / 9007199254740992.0));
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 3 + (rng() % 6);
    NetLoadForecast nl;
    for (std::size_t t = 0; t < n; ++t) nl.values.push_back(uniform(0, 1000));
    std::vector<double> alpha, alpha_hi;
    for (std::size_t t = 0; t + 1 < n; ++t) {
      alpha.push_back(uniform(0, 80));
      alpha_hi.push_back(alpha.back() + uniform(0, 40));
    }
    auto r = compute_requirements(nl, alpha);
    auto rh = compute_requirements(nl, alpha_hi);
    for (std::size_t t = 0; t + 1 < n; ++t) {
      double delta = nl.values[t + 1] - nl.values[t];
      // when neither side clamps, the shared adder cancels and the
      // difference recovers twice the net-load move (cf. the desk table:
      // 10 - 50 = -40 against a -20 MW move)
      if (r.upward[t] > 0 && r.downward[t] > 0)
        CHECK(r.upward[t] - r.downward[t] == Catch::Approx(2 * delta).margin(1e-9));
      // a large adder dominates the move on at least one side
      if (alpha[t] >= std::abs(delta))
        CHECK(std::max(r.upward[t], r.downward[t]) >= alpha[t] - 1e-9);
      // a bigger adder never shrinks a requirement
      CHECK(rh.upward[t] >= r.upward[t] - 1e-12);
      CHECK(rh.downward[t] >= r.downward[t] - 1e-12);
      CHECK(r.upward[t] >= 0.0);
      CHECK(r.downward[t] >= 0.0);
    }
  }
}
