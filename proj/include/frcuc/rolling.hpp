#pragma once

#include <map>
#include <string>
#include <vector>

#include "frcuc/milp/solver.hpp"
#include "frcuc/study_io.hpp"
#include "frcuc/uc/model.hpp"
#include "frcuc/uc/solution.hpp"

namespace frcuc {

// Deliverability audit of a scheduled window. For each period t the fleet's
// reachable output range into t+1 is computed from the schedule: committed
// survivors can move within ramp and capacity limits, committed arrivals
// add their startup range, profile injections follow their fixed schedule,
// and departing units contribute nothing. Deliverable upward FRC is the
// reachable maximum minus current supply; a departing unit's lost output
// therefore shows up as a negative contribution, which is exactly the
// non-delivery effect the scheduling model can miss.
struct FrcAuditRow {
  int period = 0;  // global label
  double scheduled_up = 0.0, scheduled_dn = 0.0;
  double deliverable_up = 0.0, deliverable_dn = 0.0;
  double required_up = 0.0, required_dn = 0.0;
  bool shortfall = false;
};

struct FrcAudit {
  std::vector<FrcAuditRow> rows;  // one per window period except the last

  bool any_shortfall() const {
    for (const auto& r : rows)
      if (r.shortfall) return true;
    return false;
  }
  const FrcAuditRow& at_period(int global_t) const {
    for (const auto& r : rows)
      if (r.period == global_t) return r;
    throw InvariantError("audit lacks period " + std::to_string(global_t));
  }
};

inline FrcAudit audit_deliverable_frc(const std::vector<Generator>& gens,
                                      const uc::UcSolution& sol,
                                      const BoundaryCondition& bc,
                                      const FrcRequirements& req) {
  const int W = sol.periods;
  auto inj = uc::scheduled_injections(gens, sol, bc);
  FrcAudit audit;
  for (int t = 0; t + 1 < W; ++t) {
    FrcAuditRow row;
    row.period = sol.start_period + t;
    row.required_up = req.upward[t];
    row.required_dn = req.downward[t];
    double supplied = inj[t];
    double reach = inj[t + 1], floor = inj[t + 1];
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const auto& gen = gens[g];
      supplied += sol.p[g][t];
      row.scheduled_up += sol.ur[g][t];
      row.scheduled_dn += sol.dr[g][t];
      if (sol.x[g][t + 1] == 0) continue;  // departing or offline: no range
      if (sol.x[g][t] == 1) {
        reach += std::min(sol.p[g][t] + gen.ramp_rate, gen.p_max);
        floor += std::max(sol.p[g][t] - gen.ramp_rate, gen.p_min);
      } else {
        reach += std::min(gen.startup_ramp, gen.p_max);
        floor += gen.p_min;
      }
    }
    row.deliverable_up = reach - supplied;
    row.deliverable_dn = supplied - floor;
    row.shortfall = row.deliverable_up < row.required_up - 1e-6 ||
                    row.deliverable_dn < row.required_dn - 1e-6;
    audit.rows.push_back(row);
  }
  return audit;
}

// Single-period economic re-dispatch of the committed fleet against a
// realized net load. Shedding is priced at VOLL; over-generation relief
// (renewable spill) carries the given price, zero in evaluation use.
struct RedispatchResult {
  std::map<std::string, double> dispatch;
  double shed = 0.0;
  double surplus = 0.0;
  double energy_cost = 0.0;      // linear production cost only
  double commitment_cost = 0.0;  // no-load + startup charges of the period
  double cost = 0.0;             // energy + commitment + voll * shed + surplus price
};

inline RedispatchResult redispatch_period(
    const std::vector<Generator>& gens,
    const std::map<std::string, int>& x_now, const std::map<std::string, int>& x_prev,
    const std::map<std::string, int>& y_now, const std::map<std::string, double>& p_prev,
    double injection, double realized_net_load, double voll, double surplus_price) {
  milp::MilpProblem lp;
  std::vector<int> online;
  std::vector<milp::LinearTerm> balance;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const auto& gen = gens[g];
    if (!x_now.count(gen.id))
      throw InvariantError("re-dispatch lacks commitment for '" + gen.id + "'");
    if (x_now.at(gen.id) == 0) continue;
    double lo = gen.p_min, hi = gen.p_max;
    if (x_prev.at(gen.id) == 1) {
      double prev = p_prev.at(gen.id);
      lo = std::max(lo, prev - gen.ramp_rate);
      hi = std::min(hi, prev + gen.ramp_rate);
    } else {
      hi = std::min(hi, gen.startup_ramp);
    }
    if (lo > hi)
      throw InfeasibleError("re-dispatch bounds empty for '" + gen.id + "'");
    int v = lp.add_variable("p_" + gen.id, lo, hi);
    lp.set_objective_term(v, gen.linear_cost);
    balance.push_back({v, 1.0});
    online.push_back((int)g);
  }
  double residual = realized_net_load - injection;
  int vshed = lp.add_variable("shed", 0.0, kInf);
  int vsurp = lp.add_variable("surplus", 0.0, kInf);
  lp.set_objective_term(vshed, voll);
  lp.set_objective_term(vsurp, surplus_price);
  balance.push_back({vshed, 1.0});
  balance.push_back({vsurp, -1.0});
  lp.add_constraint("bal", std::move(balance), milp::Sense::Equal, residual);

  auto out = milp::solve_lp_relaxation(lp);
  if (out.status != milp::SolveStatus::Optimal)
    throw InfeasibleError("re-dispatch LP not optimal: " +
                          std::string(milp::to_string(out.status)));

  RedispatchResult r;
  for (const auto& gen : gens) r.dispatch[gen.id] = 0.0;
  for (std::size_t i = 0; i < online.size(); ++i) {
    const auto& gen = gens[online[i]];
    double val = out.x[lp.variable_index("p_" + gen.id)];
    r.dispatch[gen.id] = val;
    r.energy_cost += gen.linear_cost * val;
  }
  r.shed = out.x[vshed];
  r.surplus = out.x[vsurp];
  for (const auto& gen : gens) {
    auto ity = y_now.find(gen.id);
    r.commitment_cost += gen.no_load_cost * x_now.at(gen.id) +
                         gen.startup_cost * (ity == y_now.end() ? 0 : ity->second);
  }
  r.cost = r.energy_cost + r.commitment_cost + voll * r.shed + surplus_price * r.surplus;
  return r;
}

// --- rolling emulation ----------------------------------------------------

struct RollingStep {
  int start_period = 0;
  BoundaryCondition boundary;  // state the window was solved against
  FrcRequirements requirements;
  uc::UcSolution solution;
  double realized_net_load = 0.0;
  std::map<std::string, double> realized_dispatch;
  double realized_injection = 0.0;
  double realized_shed = 0.0;
  double realized_surplus = 0.0;
  double realized_cost = 0.0;
};

struct RollingLog {
  std::vector<RollingStep> steps;
  std::vector<FrcAudit> audits;  // parallel to steps

  double total_shed() const {
    double s = 0.0;
    for (const auto& st : steps) s += st.realized_shed;
    return s;
  }
  double total_realized_cost() const {
    double s = 0.0;
    for (const auto& st : steps) s += st.realized_cost;
    return s;
  }
};

struct RollingOptions {
  milp::SolverOptions solver;
  int window_length = 4;  // periods per look-ahead window
};

// Look-ahead emulation: each step solves a fixed-length window whose first
// period's commitments were pinned by the previous step, injects the
// realized net load into that first period, re-dispatches the online fleet
// against it, and rolls the boundary forward one period.
class RollingHorizon {
 public:
  RollingHorizon(const Study& study, RollingOptions opts = {})
      : study_(study), opts_(opts) {
    boundary_ = study.boundary;
    prev_dispatch_ = boundary_.initial_power;
    opts_.solver.rel_gap = study.config.mip_gap;
  }

  const RollingLog& log() const { return log_; }

  // One roll: window starts at the given global period with the supplied
  // look-ahead forecast (entry 0 carries the realized value).
  void step(double realized_nl, const std::vector<double>& forecast_row) {
    if (realized_nl < 0.0) throw InvariantError("realized net load must be >= 0");
    int start = (int)log_.steps.size() + 1;
    if (std::abs(forecast_row.front() - realized_nl) > 1e-9)
      throw InvariantError("forecast row must start with the realized net load");

    const int W = (int)forecast_row.size();
    NetLoadForecast nl{forecast_row, true};
    auto alpha = window_alpha(start, W - 1);
    auto req = compute_requirements(nl, alpha);

    uc::WindowSpec win{start, forecast_row, req};
    uc::BuildOptions bopt;
    bopt.formulation = study_.config.formulation;
    bopt.allow_shedding = true;  // realized load is already injected here
    bopt.voll = study_.config.voll;
    auto model = uc::UcModel::build_full(study_.generators, win, boundary_, bopt);
    auto res = milp::solve_milp(model.problem(), opts_.solver);
    if (res.status == milp::SolveStatus::Infeasible ||
        res.status == milp::SolveStatus::Unbounded)
      throw InfeasibleError("window at period " + std::to_string(start) +
                            " is infeasible even with shedding slack");
    auto sol = uc::extract_solution(model, res);

    RollingStep rec;
    rec.start_period = start;
    rec.boundary = boundary_;
    rec.requirements = req;
    rec.realized_net_load = realized_nl;

    // realized re-dispatch of the first window period
    std::map<std::string, int> x_now, x_prev, y_now;
    for (std::size_t g = 0; g < study_.generators.size(); ++g) {
      const auto& id = study_.generators[g].id;
      x_now[id] = sol.x[g][0];
      x_prev[id] = *boundary_.commitment_at(id, start - 1);
      y_now[id] = sol.y[g][0];
    }
    auto inj = uc::scheduled_injections(study_.generators, sol, boundary_);
    auto red = redispatch_period(study_.generators, x_now, x_prev, y_now,
                                 prev_dispatch_, inj[0], realized_nl,
                                 study_.config.voll, /*surplus_price=*/0.0);
    rec.realized_dispatch = red.dispatch;
    rec.realized_injection = inj[0];
    rec.realized_shed = red.shed;
    rec.realized_surplus = red.surplus;
    rec.realized_cost = red.cost;
    rec.solution = sol;

    log_.audits.push_back(
        audit_deliverable_frc(study_.generators, sol, boundary_, req));

    // roll the boundary: realized dispatch anchors ramps; the next window's
    // first period takes the commitment decided here
    prev_dispatch_ = red.dispatch;
    boundary_.initial_power = red.dispatch;
    for (std::size_t g = 0; g < study_.generators.size(); ++g) {
      const auto& id = study_.generators[g].id;
      boundary_.fixed_commitments[id][start] = sol.x[g][0];
      if (W > 1) boundary_.fixed_commitments[id][start + 1] = sol.x[g][1];
    }
    log_.steps.push_back(std::move(rec));
  }

  // Replays the study's realized series against its per-step forecast rows.
  RollingLog run() {
    const auto& realized = study_.series.realized_net_load;
    const auto& rows = study_.series.forecast_net_load;
    if (rows.empty())
      throw InvariantError("rolling run needs series.forecast_net_load rows");
    std::size_t steps = std::min(realized.size(), rows.size());
    for (std::size_t k = 0; k < steps; ++k) step(realized[k], rows[k]);
    return log_;
  }

 private:
  std::vector<double> window_alpha(int start, int count) const {
    if (study_.series.alpha_mw)
      return std::vector<double>(count, *study_.series.alpha_mw);
    auto a = study_alpha_series(study_, start - 1 + count);
    return std::vector<double>(a.begin() + (start - 1), a.begin() + (start - 1 + count));
  }

  Study study_;
  RollingOptions opts_;
  BoundaryCondition boundary_;
  std::map<std::string, double> prev_dispatch_;
  RollingLog log_;
};

inline RollingLog run_rolling(const Study& study, RollingOptions opts = {}) {
  RollingHorizon rh(study, opts);
  return rh.run();
}

}  // namespace frcuc
