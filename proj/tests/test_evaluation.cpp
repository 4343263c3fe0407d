#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "frcuc/evaluation.hpp"
#include "frcuc/fixtures.hpp"

using namespace frcuc;

namespace {

// the two desk schedules of interest: the window solved at t=2 under each
// formulation, obtained by rolling one step first
struct ToySchedules {
  uc::UcSolution schedule;
  BoundaryCondition boundary;
};

ToySchedules toy_schedule_at_t2(Formulation f) {
  auto s = fixtures::toy_study();
  s.config.formulation = f;
  RollingHorizon rh(s);
  rh.step(s.series.realized_net_load[0], s.series.forecast_net_load[0]);
  rh.step(s.series.realized_net_load[1], s.series.forecast_net_load[1]);
  const auto& st = rh.log().steps[1];
  return {st.solution, st.boundary};
}

}  // namespace

TEST_CASE("scenario generation is reproducible and well-scaled") {
  std::vector<double> demand = {4920, 3960};
  std::vector<double> wind = {300, 292.5};
  auto a = generate_scenarios(demand, wind, 3000, 2500, 42);
  auto b = generate_scenarios(demand, wind, 3000, 2500, 42);
  CHECK(a.realized_net_load == b.realized_net_load);  // same seed, same draws

  auto c = generate_scenarios(demand, wind, 3000, 2500, 43);
  CHECK(a.realized_net_load != c.realized_net_load);

  // empirical sigma of the demand error at the first period: 1% of 4920
  double mean = 0.0, var = 0.0;
  for (const auto& e : a.demand_error) mean += e[0];
  mean /= a.count;
  for (const auto& e : a.demand_error) var += (e[0] - mean) * (e[0] - mean);
  var /= (a.count - 1);
  CHECK(std::sqrt(var) == Catch::Approx(49.2).epsilon(0.05));
  CHECK(std::abs(mean) < 3.0 * 49.2 / std::sqrt((double)a.count));

  SECTION("zero sigmas collapse to the central forecast") {
    auto z = generate_scenarios(demand, wind, 3000, 20, 7, 0.0, 0.0);
    for (const auto& nl : z.realized_net_load) {
      CHECK(nl[0] == Catch::Approx(4620.0));
      CHECK(nl[1] == Catch::Approx(3667.5));
    }
  }
}

TEST_CASE("central scenario evaluates to the scheduled dispatch cost") {
  auto [schedule, boundary] = toy_schedule_at_t2(Formulation::Conventional);
  std::vector<double> central = {660, 640, 620, 590};
  auto out = evaluate_schedule(schedule, central, fixtures::toy_study().generators,
                               boundary, 9000.0);
  CHECK(out.shed_mwh == Catch::Approx(0.0).margin(1e-9));
  double sched_cost = 0.0;
  for (double c : schedule.period_cost) sched_cost += c;
  CHECK(out.generation_cost == Catch::Approx(sched_cost).epsilon(1e-6));
}

TEST_CASE("25 MW surprise at the third period: shed under the conventional "
          "schedule, none under the proposed one") {
  std::vector<double> surprise = {660, 665, 620, 590};
  auto gens = fixtures::toy_study().generators;
  {
    auto [schedule, boundary] = toy_schedule_at_t2(Formulation::Conventional);
    auto out = evaluate_schedule(schedule, surprise, gens, boundary, 9000.0);
    CHECK(out.shed_mwh == Catch::Approx(15.0).margin(1e-6));
    CHECK(out.shed_cost == Catch::Approx(135000.0).margin(1e-3));
  }
  {
    auto [schedule, boundary] = toy_schedule_at_t2(Formulation::Proposed);
    auto out = evaluate_schedule(schedule, surprise, gens, boundary, 9000.0);
    CHECK(out.shed_mwh == Catch::Approx(0.0).margin(1e-9));
  }
}

TEST_CASE("deviations within the adder never shed under the proposed schedule",
          "[property]") {
  // The adder covers the one-interval-ahead forecast error, so the protected
  // scenario family keeps each interval-to-interval deviation change within
  // alpha (|e_{t+1} - e_t| <= 30 with the realized first period at e = 0).
  // Unrestricted per-period grids are genuinely unservable: after e.g.
  // e = (-30, +30) the committed fleet's ramp cannot span the 2-alpha swing
  // regardless of the dispatch policy.
  auto [schedule, boundary] = toy_schedule_at_t2(Formulation::Proposed);
  ScheduleEvaluator ev(schedule, fixtures::toy_study().generators, boundary, 9000.0);
  const std::vector<double> central = {660, 640, 620, 590};
  const std::vector<double> offsets = {-30, -15, 0, 15, 30};
  int cases = 0;
  for (double e1 : offsets)
    for (double e2 : offsets)
      for (double e3 : offsets) {
        if (std::abs(e1) > 30 || std::abs(e2 - e1) > 30 || std::abs(e3 - e2) > 30)
          continue;
        std::vector<double> nl = {central[0], central[1] + e1, central[2] + e2,
                                  central[3] + e3};
        auto out = ev.evaluate(nl);
        INFO("offsets " << e1 << "," << e2 << "," << e3);
        CHECK(out.shed_mwh == Catch::Approx(0.0).margin(1e-9));
        ++cases;
      }
  CHECK(cases == 75);
}

TEST_CASE("shrinking every error toward zero never increases shed energy",
          "[property]") {
  auto [schedule, boundary] = toy_schedule_at_t2(Formulation::Conventional);
  auto gens = fixtures::toy_study().generators;
  const std::vector<double> central = {660, 640, 620, 590};
  std::mt19937_64 rng(314159);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * (1.0 / 9007199254740992.0));
  };
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> err(4);
    for (auto& e : err) e = uniform(-60, 60);
    err[0] = 0.0;  // the first period is realized, not uncertain
    double prev_shed = -1.0;
    for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      std::vector<double> nl(4);
      for (int t = 0; t < 4; ++t)
        nl[t] = std::max(0.0, central[t] + lambda * err[t]);
      auto out = evaluate_schedule(schedule, nl, gens, boundary, 9000.0);
      if (prev_shed >= 0.0) CHECK(out.shed_mwh >= prev_shed - 1e-7);
      prev_shed = out.shed_mwh;
    }
  }
}

TEST_CASE("aggregates: expected cost is exactly the sum of the averages") {
  EvaluationReport rep;
  rep.scenarios = {{1000.0, 1.0, 9000.0, 0.0},
                   {2000.0, 0.0, 0.0, 0.5},
                   {1500.0, 0.25, 2250.0, 0.0}};
  rep.aggregate();
  CHECK(rep.expected_operating_cost == rep.avg_generation_cost + rep.avg_shed_cost);
  CHECK(rep.shed_event_count == 2);
}

TEST_CASE("toy comparison: proposed never sheds inside the sweep band") {
  auto s = fixtures::toy_day_ahead_study();
  milp::SolverOptions so;
  so.rel_gap = 1e-6;
  auto result = run_comparison(s, {1.0}, 60, 9001, so, 2);
  const auto& [prop, conv] = result.by_multiplier.at(1.0);
  CHECK(prop.schedule_status == milp::SolveStatus::Optimal);
  CHECK(conv.schedule_status == milp::SolveStatus::Optimal);
  CHECK(prop.expected_operating_cost ==
        prop.avg_generation_cost + prop.avg_shed_cost);
  // evaluation is deterministic: a second run shows identical aggregates
  auto again = run_comparison(s, {1.0}, 60, 9001, so, 1);
  const auto& [prop2, conv2] = again.by_multiplier.at(1.0);
  CHECK(prop.expected_operating_cost == prop2.expected_operating_cost);
  CHECK(conv.expected_operating_cost == conv2.expected_operating_cost);
  CHECK(prop.shed_event_count == prop2.shed_event_count);
}
