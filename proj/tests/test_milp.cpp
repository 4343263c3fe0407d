#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "frcuc/milp/branch_and_bound.hpp"
#include "frcuc/milp/problem.hpp"
#include "frcuc/milp/simplex.hpp"

using namespace frcuc;
using namespace frcuc::milp;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * ((rng() >> 11) * (1.0 / 9007199254740992.0));
}

}  // namespace

TEST_CASE("lp: single bounded variable") {
  MilpProblem p;
  int x = p.add_variable("x", 0, 10);
  p.set_objective_term(x, -1.0);
  p.add_constraint("c", {{x, 1.0}}, Sense::LessEqual, 5.0);
  auto r = solve_lp_relaxation(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[0] == Catch::Approx(5.0));
  CHECK(r.objective == Catch::Approx(-5.0));
}

TEST_CASE("lp: infeasible and unbounded detection") {
  {
    MilpProblem p;
    int x = p.add_variable("x", 0, 2);
    p.add_constraint("c", {{x, 1.0}}, Sense::GreaterEqual, 5.0);
    CHECK(solve_lp_relaxation(p).status == SolveStatus::Infeasible);
  }
  {
    MilpProblem p;
    int x = p.add_variable("x", 0, kInf);
    p.set_objective_term(x, -1.0);
    p.add_constraint("c", {{x, 1.0}}, Sense::GreaterEqual, 1.0);
    CHECK(solve_lp_relaxation(p).status == SolveStatus::Unbounded);
  }
}

TEST_CASE("lp: redundant equalities terminate at the optimum") {
  MilpProblem p;
  int x = p.add_variable("x", 0, 10), y = p.add_variable("y", 0, 10);
  p.set_objective_term(x, 1.0);
  p.set_objective_term(y, 2.0);
  p.add_constraint("c1", {{x, 1}, {y, 1}}, Sense::Equal, 4);
  p.add_constraint("c2", {{x, 2}, {y, 2}}, Sense::Equal, 8);
  p.add_constraint("c3", {{x, 3}, {y, 3}}, Sense::Equal, 12);
  p.add_constraint("c4", {{x, 1}, {y, 1}}, Sense::GreaterEqual, 4);
  auto r = solve_lp_relaxation(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == Catch::Approx(4.0));
}

TEST_CASE("lp: duality certificate on random problems") {
  std::mt19937_64 rng(2024);
  int optimal_count = 0;
  for (int trial = 0; trial < 150; ++trial) {
    MilpProblem p;
    int n = 2 + (int)(rng() % 8), m = 1 + (int)(rng() % 8);
    for (int j = 0; j < n; ++j) {
      double lo = uniform(rng, -4, 0), hi = lo + uniform(rng, 0.5, 6);
      p.add_variable("v" + std::to_string(j), lo, hi);
      p.set_objective_term(j, uniform(rng, -3, 3));
    }
    for (int i = 0; i < m; ++i) {
      std::vector<LinearTerm> terms;
      for (int j = 0; j < n; ++j)
        if (rng() % 100 < 60) terms.push_back({j, uniform(rng, -4, 4)});
      auto sense = (Sense)(rng() % 3);
      p.add_constraint("c" + std::to_string(i), terms, sense, uniform(rng, -4, 4));
    }
    auto r = solve_lp_relaxation(p);
    if (r.status != SolveStatus::Optimal) continue;
    ++optimal_count;
    CHECK(check_feasibility(p, r.x).empty());

    // dual feasibility within 1e-7 and primal/dual objective agreement
    const auto& cons = p.constraints();
    double dual_obj = 0.0;
    for (int i = 0; i < m; ++i) {
      dual_obj += r.duals[i] * cons[i].rhs;
      if (cons[i].sense == Sense::LessEqual)
        CHECK(r.duals[i] <= 1e-7);  // tightening a <= row cannot help a min
      if (cons[i].sense == Sense::GreaterEqual)
        CHECK(r.duals[i] >= -1e-7);
    }
    for (int j = 0; j < n; ++j) {
      double d = r.reduced_costs[j];
      const auto& v = p.variables()[j];
      // pricing tolerance scales with cost magnitude (|c| <= 3 here)
      const double tol = 1e-6;
      bool at_lower = std::abs(r.x[j] - v.lower) < 1e-6;
      bool at_upper = std::abs(r.x[j] - v.upper) < 1e-6;
      if (!at_lower && !at_upper) CHECK(std::abs(d) < 1e-6);
      if (at_lower && !at_upper) CHECK(d >= -tol);
      if (at_upper && !at_lower) CHECK(d <= tol);
      dual_obj += d * r.x[j];
    }
    CHECK(dual_obj == Catch::Approx(r.objective).epsilon(1e-6));
  }
  CHECK(optimal_count > 50);  // the generator must exercise the optimal path
}

TEST_CASE("lp: deterministic across repeat solves") {
  std::mt19937_64 rng(7);
  MilpProblem p;
  for (int j = 0; j < 12; ++j) {
    p.add_variable("v" + std::to_string(j), 0, uniform(rng, 1, 5));
    p.set_objective_term(j, uniform(rng, -2, 2));
  }
  for (int i = 0; i < 10; ++i) {
    std::vector<LinearTerm> terms;
    for (int j = 0; j < 12; ++j)
      if (rng() % 100 < 50) terms.push_back({j, uniform(rng, -2, 2)});
    p.add_constraint("c" + std::to_string(i), terms, Sense::LessEqual,
                     uniform(rng, 0, 6));
  }
  auto a = solve_lp_relaxation(p);
  auto b = solve_lp_relaxation(p);
  REQUIRE(a.status == b.status);
  CHECK(a.objective == b.objective);  // bitwise equality expected
  CHECK(a.x == b.x);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("bnb: integral relaxation finishes at the root") {
  MilpProblem p;
  int x = p.add_variable("x", 0, 1, VarKind::Binary);
  p.set_objective_term(x, -2.0);
  p.add_constraint("c", {{x, 1.0}}, Sense::LessEqual, 1.0);
  auto r = branch_and_bound(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.node_count == 1);
  CHECK(r.objective == Catch::Approx(-2.0));
}

TEST_CASE("bnb: knapsack with fractional relaxation") {
  // max 5a+4b+3c s.t. 2a+3b+c <= 4  -> a=1, c=1
  MilpProblem p;
  p.add_variable("a", 0, 1, VarKind::Binary);
  p.add_variable("b", 0, 1, VarKind::Binary);
  p.add_variable("c", 0, 1, VarKind::Binary);
  p.set_objective_term(0, -5);
  p.set_objective_term(1, -4);
  p.set_objective_term(2, -3);
  p.add_constraint("cap", {{0, 2}, {1, 3}, {2, 1}}, Sense::LessEqual, 4);
  BnbOptions o;
  o.rel_gap = 1e-9;
  auto r = branch_and_bound(p, o);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == Catch::Approx(-8.0));
  CHECK(r.values[0] == Catch::Approx(1.0));
  CHECK(r.values[1] == Catch::Approx(0.0));
  CHECK(r.values[2] == Catch::Approx(1.0));
  CHECK(check_feasibility(p, r.values).empty());
}

TEST_CASE("bnb: node budget reports a gap-limit result") {
  std::mt19937_64 rng(99);
  MilpProblem p;
  const int n = 16;
  std::vector<LinearTerm> row;
  for (int j = 0; j < n; ++j) {
    p.add_variable("b" + std::to_string(j), 0, 1, VarKind::Binary);
    p.set_objective_term(j, -uniform(rng, 1, 3));
    row.push_back({j, uniform(rng, 1, 3)});
  }
  p.add_constraint("cap", row, Sense::LessEqual, 7.5);
  BnbOptions o;
  o.rel_gap = 1e-12;
  o.max_nodes = 3;
  o.root_dive = true;  // guarantees an incumbent before the budget trips
  auto r = branch_and_bound(p, o);
  CHECK(r.status == SolveStatus::GapLimit);
  CHECK(r.gap > 0.0);
  CHECK(check_feasibility(p, r.values).empty());
}

TEST_CASE("bnb: incumbent dominates the root relaxation") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 25; ++trial) {
    MilpProblem p;
    int n = 4 + (int)(rng() % 8);
    std::vector<LinearTerm> row;
    for (int j = 0; j < n; ++j) {
      p.add_variable("b" + std::to_string(j), 0, 1, VarKind::Binary);
      p.set_objective_term(j, uniform(rng, -4, 1));
      row.push_back({j, uniform(rng, 0.5, 3)});
    }
    p.add_constraint("cap", row, Sense::LessEqual, uniform(rng, 1, 6));
    BranchAndBound bb(p, {});
    auto r = bb.run();
    if (r.status != SolveStatus::Optimal) continue;
    CHECK(r.objective >= bb.root_bound() - 1e-9 * (1 + std::abs(r.objective)));
  }
}

TEST_CASE("check_feasibility lists violations with magnitudes") {
  MilpProblem p;
  int x = p.add_variable("x", 0, 1, VarKind::Binary);
  int y = p.add_variable("y", 0, 10);
  p.add_constraint("r", {{x, 2.0}, {y, 1.0}}, Sense::LessEqual, 3.0);
  SECTION("clean point") {
    CHECK(check_feasibility(p, {1.0, 1.0}).empty());
  }
  SECTION("row violation magnitude") {
    auto v = check_feasibility(p, {1.0, 2.0});
    REQUIRE(v.size() == 1);
    CHECK(v[0].what.find("row: r") != std::string::npos);
    CHECK(v[0].magnitude == Catch::Approx(1.0));
  }
  SECTION("bound and integrality") {
    auto v = check_feasibility(p, {0.5, -1.0});
    REQUIRE(v.size() == 2);
    CHECK(v[0].what.find("integrality") != std::string::npos);
    CHECK(v[1].what.find("below lower") != std::string::npos);
  }
}
