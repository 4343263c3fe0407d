#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <thread>
#include <vector>

#include "frcuc/rolling.hpp"

namespace frcuc {

// Scenario draws: zero-mean normal errors, demand sigma proportional to the
// period's forecast demand, wind sigma proportional to installed capacity.
// Sampling uses an explicit Box-Muller transform over mt19937_64 so the
// draws are reproducible across standard libraries, not just across runs.
struct ScenarioSet {
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<std::vector<double>> demand_error;  // [scenario][period]
  std::vector<std::vector<double>> wind_error;
  std::vector<std::vector<double>> realized_net_load;
};

namespace detail {

class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}
  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  double uniform() {
    return (rng_() >> 11) * (1.0 / 9007199254740992.0);  // [0,1) with 53 bits
  }
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

inline ScenarioSet generate_scenarios(const std::vector<double>& demand_forecast,
                                      const std::vector<double>& wind_forecast,
                                      double installed_wind_mw, int count,
                                      std::uint64_t seed,
                                      double sigma_demand_frac = 0.01,
                                      double sigma_wind_frac = 0.04) {
  if (count < 1) throw InvariantError("scenario count must be >= 1");
  if (demand_forecast.size() != wind_forecast.size())
    throw InvariantError("demand and wind forecasts differ in length");
  ScenarioSet s;
  s.seed = seed;
  s.count = count;
  detail::NormalSampler normal(seed);
  const std::size_t T = demand_forecast.size();
  double sigma_w = sigma_wind_frac * installed_wind_mw;
  s.demand_error.resize(count);
  s.wind_error.resize(count);
  s.realized_net_load.resize(count);
  for (int i = 0; i < count; ++i) {
    auto& de = s.demand_error[i];
    auto& we = s.wind_error[i];
    auto& nl = s.realized_net_load[i];
    de.resize(T);
    we.resize(T);
    nl.resize(T);
    for (std::size_t t = 0; t < T; ++t) de[t] = sigma_demand_frac * demand_forecast[t] * normal();
    for (std::size_t t = 0; t < T; ++t) we[t] = sigma_w * normal();
    for (std::size_t t = 0; t < T; ++t)
      nl[t] = std::max(0.0, demand_forecast[t] + de[t] - (wind_forecast[t] + we[t]));
  }
  return s;
}

// Builds a scenario set directly from explicit net-load series (used by the
// gridded desk-scale studies, where errors are swept rather than sampled).
inline ScenarioSet scenarios_from_net_loads(std::vector<std::vector<double>> net_loads) {
  ScenarioSet s;
  s.count = (int)net_loads.size();
  s.realized_net_load = std::move(net_loads);
  return s;
}

struct ScenarioOutcome {
  double generation_cost = 0.0;  // energy + commitment charges over the horizon
  double shed_mwh = 0.0;
  double shed_cost = 0.0;
  double surplus_mwh = 0.0;
};

// Replays a fixed schedule against realized net-load series. The committed
// fleet deploys around its scheduled dispatch: one LP over the horizon with
// per-unit upward/downward deviation variables, ramp limits linking real
// outputs across periods, fixed profile injections, shedding at VOLL and
// free over-generation relief (spill). Upward deviations pay the unit's
// energy rate while downward ones carry only a token credit, so the central
// scenario reproduces the schedule exactly instead of re-optimizing it.
class ScheduleEvaluator {
 public:
  ScheduleEvaluator(const uc::UcSolution& schedule, const std::vector<Generator>& gens,
                    const BoundaryCondition& boundary, double voll)
      : schedule_(schedule), gens_(gens), voll_(voll) {
    inj_ = uc::scheduled_injections(gens, schedule, boundary);
    const int W = schedule.periods;
    vup_.assign(gens.size(), std::vector<int>(W, -1));
    vdn_ = vup_;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const auto& gen = gens[g];
      for (int t = 0; t < W; ++t) {
        if (schedule.x[g][t] == 0) continue;
        double s = schedule.p[g][t];
        vup_[g][t] = prob_.add_variable("up_" + gen.id + "_t" + std::to_string(t),
                                        0.0, std::max(0.0, gen.p_max - s));
        vdn_[g][t] = prob_.add_variable("dn_" + gen.id + "_t" + std::to_string(t),
                                        0.0, std::max(0.0, s - gen.p_min));
        prob_.set_objective_term(vup_[g][t], gen.linear_cost);
        prob_.set_objective_term(vdn_[g][t], -1e-6 * gen.linear_cost);
      }
    }
    vshed_.assign(W, -1);
    vspill_.assign(W, -1);
    for (int t = 0; t < W; ++t) {
      vshed_[t] = prob_.add_variable("shed_t" + std::to_string(t), 0.0, kInf);
      vspill_[t] = prob_.add_variable("spill_t" + std::to_string(t), 0.0, kInf);
      prob_.set_objective_term(vshed_[t], voll);
    }

    // ramp coupling on realized outputs; deviations shift both endpoints
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const auto& gen = gens[g];
      for (int t = 0; t < W; ++t) {
        if (schedule.x[g][t] == 0) continue;
        double s = schedule.p[g][t];
        int prev_x;
        double prev_s;
        if (t > 0) {
          prev_x = schedule.x[g][t - 1];
          prev_s = schedule.p[g][t - 1];
        } else {
          auto h = boundary.commitment_at(gen.id, schedule.start_period - 1);
          prev_x = h ? *h : 0;
          auto it = boundary.initial_power.find(gen.id);
          prev_s = it == boundary.initial_power.end() ? 0.0 : it->second;
        }
        std::string tag = gen.id + "_t" + std::to_string(t);
        if (prev_x == 1) {
          std::vector<milp::LinearTerm> upr{{vup_[g][t], 1.0}, {vdn_[g][t], -1.0}};
          std::vector<milp::LinearTerm> dnr{{vup_[g][t], -1.0}, {vdn_[g][t], 1.0}};
          if (t > 0 && vup_[g][t - 1] >= 0) {
            upr.push_back({vup_[g][t - 1], -1.0});
            upr.push_back({vdn_[g][t - 1], 1.0});
            dnr.push_back({vup_[g][t - 1], 1.0});
            dnr.push_back({vdn_[g][t - 1], -1.0});
          }
          prob_.add_constraint("ramp_up_" + tag, std::move(upr), milp::Sense::LessEqual,
                               gen.ramp_rate - (s - prev_s));
          prob_.add_constraint("ramp_dn_" + tag, std::move(dnr), milp::Sense::LessEqual,
                               gen.ramp_rate + (s - prev_s));
        } else {
          // first above-minimum period after a start: capped by startup ramp
          prob_.add_constraint("ramp_su_" + tag,
                               {{vup_[g][t], 1.0}, {vdn_[g][t], -1.0}},
                               milp::Sense::LessEqual, gen.startup_ramp - s);
        }
        bool departs = t + 1 < W ? schedule.x[g][t + 1] == 0 : false;
        if (departs)  // last above-minimum output is capped by shutdown ramp
          prob_.add_constraint("ramp_sd_" + tag,
                               {{vup_[g][t], 1.0}, {vdn_[g][t], -1.0}},
                               milp::Sense::LessEqual, gen.shutdown_ramp - s);
      }
    }

    // balance in deviation form; the rhs carries the scenario's net load
    central_rhs_.resize(prob_.num_constraints());
    for (std::size_t i = 0; i < prob_.num_constraints(); ++i)
      central_rhs_[i] = prob_.constraints()[i].rhs;
    balance_row_.assign(W, -1);
    sched_supply_.assign(W, 0.0);
    for (int t = 0; t < W; ++t) {
      std::vector<milp::LinearTerm> terms;
      double sched_sum = inj_[t];
      for (std::size_t g = 0; g < gens.size(); ++g) {
        if (vup_[g][t] < 0) continue;
        terms.push_back({vup_[g][t], 1.0});
        terms.push_back({vdn_[g][t], -1.0});
        sched_sum += schedule_.p[g][t];
      }
      terms.push_back({vshed_[t], 1.0});
      terms.push_back({vspill_[t], -1.0});
      sched_supply_[t] = sched_sum;
      balance_row_[t] = prob_.add_constraint("bal_t" + std::to_string(t),
                                             std::move(terms), milp::Sense::Equal, 0.0);
      central_rhs_.push_back(0.0);
    }

    // commitment charges are scenario-independent
    for (std::size_t g = 0; g < gens.size(); ++g)
      for (int t = 0; t < schedule.periods; ++t)
        fixed_cost_ += gens[g].no_load_cost * schedule.x[g][t] +
                       gens[g].startup_cost * schedule.y[g][t];

    auto central = milp::SimplexSolver(prob_).solve();
    if (central.status != milp::SolveStatus::Optimal)
      throw InfeasibleError("schedule deployment model infeasible at the central forecast");
    central_basis_ = central.statuses;
  }

  ScenarioOutcome evaluate(const std::vector<double>& realized_nl) const {
    if ((int)realized_nl.size() < schedule_.periods)
      throw InvariantError("scenario shorter than the schedule horizon");
    std::vector<double> rhs = central_rhs_;
    for (int t = 0; t < schedule_.periods; ++t)
      rhs[balance_row_[t]] = realized_nl[t] - sched_supply_[t];
    milp::SimplexSolver solver(prob_);
    auto out = solver.solve(nullptr, nullptr, &central_basis_, &rhs);
    if (out.status != milp::SolveStatus::Optimal)
      throw InfeasibleError("deployment LP not optimal: " +
                            std::string(milp::to_string(out.status)));
    ScenarioOutcome res;
    res.generation_cost = fixed_cost_;
    for (std::size_t g = 0; g < gens_.size(); ++g)
      for (int t = 0; t < schedule_.periods; ++t) {
        if (vup_[g][t] < 0) continue;
        double p = schedule_.p[g][t] + out.x[vup_[g][t]] - out.x[vdn_[g][t]];
        res.generation_cost += gens_[g].linear_cost * p;
      }
    for (int t = 0; t < schedule_.periods; ++t) {
      res.shed_mwh += out.x[vshed_[t]];
      res.surplus_mwh += out.x[vspill_[t]];
    }
    if (res.shed_mwh < 1e-11) res.shed_mwh = 0.0;
    if (res.surplus_mwh < 1e-11) res.surplus_mwh = 0.0;
    res.shed_cost = voll_ * res.shed_mwh;
    return res;
  }

 private:
  uc::UcSolution schedule_;
  std::vector<Generator> gens_;
  double voll_;
  std::vector<double> inj_;
  milp::MilpProblem prob_;
  std::vector<std::vector<int>> vup_, vdn_;
  std::vector<int> vshed_, vspill_;
  std::vector<int> balance_row_;
  std::vector<double> central_rhs_, sched_supply_;
  std::vector<milp::VarStatus> central_basis_;
  double fixed_cost_ = 0.0;
};

inline ScenarioOutcome evaluate_schedule(const uc::UcSolution& schedule,
                                         const std::vector<double>& realized_nl,
                                         const std::vector<Generator>& gens,
                                         const BoundaryCondition& boundary,
                                         double voll) {
  ScheduleEvaluator ev(schedule, gens, boundary, voll);
  return ev.evaluate(realized_nl);
}

struct EvaluationReport {
  milp::SolveStatus schedule_status = milp::SolveStatus::Infeasible;
  double schedule_objective = kInf;
  std::vector<ScenarioOutcome> scenarios;
  double avg_generation_cost = 0.0;
  double avg_shed_cost = 0.0;
  double expected_operating_cost = 0.0;  // sum of the two averages, exactly
  long shed_event_count = 0;

  void aggregate() {
    KahanSum gen, shed;
    shed_event_count = 0;
    for (const auto& sc : scenarios) {
      gen.add(sc.generation_cost);
      shed.add(sc.shed_cost);
      if (sc.shed_mwh > 1e-6) ++shed_event_count;
    }
    std::size_t n = scenarios.empty() ? 1 : scenarios.size();
    avg_generation_cost = gen.value() / (double)n;
    avg_shed_cost = shed.value() / (double)n;
    expected_operating_cost = avg_generation_cost + avg_shed_cost;
  }
};

// Solves the horizon-long commitment problem for the study at the central
// forecast (no shedding slack: an unservable schedule is an error, not a
// quietly penalized one).
inline std::pair<uc::UcSolution, milp::SolveResult> solve_day_ahead(
    const Study& study, Formulation formulation, const milp::SolverOptions& sopts,
    double alpha_multiplier) {
  const auto& nl = study.forecast.values;
  auto alpha = study.series.alpha_mw
                   ? std::vector<double>(nl.size() - 1, *study.series.alpha_mw)
                   : compute_alpha(std::vector<double>(study.series.demand.begin(),
                                                       study.series.demand.begin() +
                                                           (nl.size() - 1)),
                                   study.series.installed_wind_mw, alpha_multiplier,
                                   study.config.sigma_demand_frac,
                                   study.config.sigma_wind_frac);
  auto req = compute_requirements(study.forecast, alpha);
  uc::WindowSpec win{1, nl, req};
  uc::BuildOptions bopt;
  bopt.formulation = formulation;
  bopt.allow_shedding = false;
  bopt.voll = study.config.voll;
  auto model = uc::UcModel::build_full(study.generators, win, study.boundary, bopt);
  auto res = milp::solve_milp(model.problem(), sopts);
  if (res.status == milp::SolveStatus::Infeasible)
    throw InfeasibleError(std::string("day-ahead schedule (") + to_string(formulation) +
                          ") is infeasible");
  return {uc::extract_solution(model, res), res};
}

inline EvaluationReport evaluate_on_scenarios(const uc::UcSolution& schedule,
                                              double schedule_objective,
                                              milp::SolveStatus schedule_status,
                                              const ScenarioSet& scenarios,
                                              const Study& study, int jobs = 1) {
  EvaluationReport rep;
  rep.schedule_status = schedule_status;
  rep.schedule_objective = schedule_objective;
  rep.scenarios.resize(scenarios.count);
  // one deployment model shared by every scenario; each solve warm-starts
  // from the central basis, so results do not depend on the thread split
  ScheduleEvaluator evaluator(schedule, study.generators, study.boundary,
                              study.config.voll);
  auto work = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i)
      rep.scenarios[i] = evaluator.evaluate(scenarios.realized_net_load[i]);
  };
  jobs = std::max(1, jobs);
  if (jobs == 1 || scenarios.count < 2 * jobs) {
    work(0, scenarios.count);
  } else {
    std::vector<std::thread> pool;
    int chunk = (scenarios.count + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      int lo = j * chunk, hi = std::min(scenarios.count, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  rep.aggregate();
  return rep;
}

struct ComparisonResult {
  // keyed by alpha multiplier; first = proposed, second = conventional
  std::map<double, std::pair<EvaluationReport, EvaluationReport>> by_multiplier;
};

// The five-step study: schedule both formulations at the central forecast
// for each requirement multiplier, then replay every scenario against both
// schedules and aggregate costs.
inline ComparisonResult run_comparison(const Study& study,
                                       const std::vector<double>& multipliers,
                                       int scenario_count, std::uint64_t seed,
                                       const milp::SolverOptions& sopts, int jobs = 1) {
  if (study.series.demand.empty())
    throw InvariantError("run_comparison needs demand/wind series");
  auto scenarios = generate_scenarios(
      study.series.demand, study.series.wind, study.series.installed_wind_mw,
      scenario_count, seed, study.config.sigma_demand_frac, study.config.sigma_wind_frac);
  ComparisonResult out;
  for (double k : multipliers) {
    auto [prop_sol, prop_res] = solve_day_ahead(study, Formulation::Proposed, sopts, k);
    auto [conv_sol, conv_res] = solve_day_ahead(study, Formulation::Conventional, sopts, k);
    auto prop_rep = evaluate_on_scenarios(prop_sol, prop_res.objective, prop_res.status,
                                          scenarios, study, jobs);
    auto conv_rep = evaluate_on_scenarios(conv_sol, conv_res.objective, conv_res.status,
                                          scenarios, study, jobs);
    out.by_multiplier.emplace(k, std::make_pair(std::move(prop_rep), std::move(conv_rep)));
  }
  return out;
}

}  // namespace frcuc
