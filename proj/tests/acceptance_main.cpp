// Acceptance suite: one check per release criterion, each printing a single
// PASS/FAIL line with its measured numbers and runtime. The process exits
// with the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "frcuc/evaluation.hpp"
#include "frcuc/fixtures.hpp"
#include "frcuc/milp/branch_and_bound.hpp"
#include "frcuc/report.hpp"
#include "frcuc/rolling.hpp"

using namespace frcuc;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Timer {
  Clock::time_point t0 = Clock::now();
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }
};

void report_line(const std::string& name, bool pass, double secs,
                 const std::string& detail) {
  std::printf("%s  %-34s (%.2f s)  %s\n", pass ? "PASS" : "FAIL", name.c_str(), secs,
              detail.c_str());
  if (!pass) ++failures;
}

bool approx(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * ((rng() >> 11) * (1.0 / 9007199254740992.0));
}

// --- criterion 1: requirement arithmetic --------------------------------

void c1_requirements() {
  Timer timer;
  auto a30 = std::vector<double>(3, 30.0);
  auto r1 = compute_requirements({{690, 660, 640, 620}, true}, a30);
  auto r2 = compute_requirements({{660, 640, 620, 590}, true}, a30);
  auto r3 = compute_requirements({{665, 620, 590, 570}, true}, a30);
  bool pass = r1.upward == std::vector<double>{0, 10, 10} &&
              r1.downward == std::vector<double>{60, 50, 50} &&
              r2.upward == std::vector<double>{10, 10, 0} &&
              r2.downward == std::vector<double>{50, 50, 60} &&
              r3.upward == std::vector<double>{0, 0, 10} &&
              r3.downward == std::vector<double>{75, 60, 50};
  double secs = timer.seconds();
  pass = pass && secs < 1.0;
  report_line("frc-requirements-exact", pass, secs,
              "three forecast blocks, integer MW equality");
}

// --- criteria 2 and 3: the desk windows ----------------------------------

void c2_c3_windows(RollingLog& conv_log, RollingLog& prop_log) {
  {
    Timer timer;
    auto s = fixtures::toy_study();
    s.config.formulation = Formulation::Conventional;
    conv_log = run_rolling(s);
    double secs = timer.seconds();
    const auto& sol = conv_log.steps[1].solution;
    int g4 = sol.gen_index("G4");
    bool pass = sol.x[g4] == std::vector<int>{1, 0, 0, 0};
    const double want[4] = {13300, 11200, 10400, 9200};
    std::ostringstream det;
    det << "costs";
    for (int t = 0; t < 4; ++t) {
      pass = pass && approx(sol.period_cost[t], want[t], 1e-3);
      det << ' ' << sol.period_cost[t] / 1000.0 << "k";
    }
    pass = pass && secs < 10.0;
    report_line("conventional-window-t2", pass, secs, det.str());
  }
  {
    Timer timer;
    auto s = fixtures::toy_study();
    s.config.formulation = Formulation::Proposed;
    prop_log = run_rolling(s);
    double secs = timer.seconds();
    const auto& sol = prop_log.steps[1].solution;
    int g4 = sol.gen_index("G4");
    bool pass = sol.x[g4] == std::vector<int>{1, 1, 0, 0};
    const double want[4] = {13300, 12900, 10400, 9200};
    std::ostringstream det;
    det << "costs";
    for (int t = 0; t < 4; ++t) {
      pass = pass && approx(sol.period_cost[t], want[t], 1e-3);
      det << ' ' << sol.period_cost[t] / 1000.0 << "k";
    }
    pass = pass && secs < 30.0;
    report_line("proposed-window-t2", pass, secs, det.str());
  }
}

// --- criterion 4: non-delivery demonstration ------------------------------

void c4_non_delivery(const RollingLog& conv, const RollingLog& prop) {
  Timer timer;
  const auto& c3 = conv.steps[2];
  const auto& p3 = prop.steps[2];
  bool pass = std::abs(c3.realized_shed - 15.0) < 1e-9 &&
              approx(c3.realized_cost, 146600.0, 1e-3) &&
              std::abs(p3.realized_shed) < 1e-9 &&
              approx(p3.realized_cost, 13500.0, 1e-3);
  std::ostringstream det;
  det << "conv shed " << c3.realized_shed << " MW cost " << c3.realized_cost
      << " $; prop shed " << p3.realized_shed << " MW cost " << p3.realized_cost
      << " $";
  report_line("non-delivery-demonstration", pass, timer.seconds(), det.str());
}

// --- criterion 5: audit value -----------------------------------------------

void c5_audit(const RollingLog& conv, const RollingLog& prop) {
  Timer timer;
  const auto& crow = conv.audits[1].at_period(2);
  const auto& prow = prop.audits[1].at_period(2);
  bool pass = crow.deliverable_up == -10.0 && crow.shortfall &&
              prow.deliverable_up >= 10.0;
  std::ostringstream det;
  det << "conventional deliverable " << crow.deliverable_up
      << " MW, proposed " << prow.deliverable_up << " MW";
  report_line("audit-deliverable-frc", pass, timer.seconds(), det.str());
}

// --- criterion 6: in-bounds reliability sweep -------------------------------

void c6_sweep() {
  Timer timer;
  bool prop_all_zero = true;
  bool conv_any_shed = false;
  for (int r = 610; r <= 670; r += 5) {
    for (auto f : {Formulation::Conventional, Formulation::Proposed}) {
      auto s = fixtures::toy_study();
      s.config.formulation = f;
      s.series.realized_net_load[2] = r;
      s.series.forecast_net_load[2][0] = r;
      auto log = run_rolling(s);
      double shed = log.steps[2].realized_shed;
      if (f == Formulation::Proposed && shed > 1e-9) prop_all_zero = false;
      if (f == Formulation::Conventional && shed > 1e-9) conv_any_shed = true;
    }
  }
  double secs = timer.seconds();
  bool pass = prop_all_zero && conv_any_shed && secs < 300.0;
  std::ostringstream det;
  det << "proposed shed-free at all 13 points: " << (prop_all_zero ? "yes" : "no")
      << "; conventional sheds somewhere: " << (conv_any_shed ? "yes" : "no");
  report_line("in-bounds-reliability-sweep", pass, secs, det.str());
}

// --- criterion 7: enumeration oracle ----------------------------------------

struct OracleInstance {
  std::vector<Generator> gens;
  BoundaryCondition bc;
  uc::WindowSpec win;
};

OracleInstance random_instance(std::mt19937_64& rng) {
  OracleInstance inst;
  int n = 2 + (int)(rng() % 3);  // 2..4 units
  int W = 4;                     // 3 free commitment periods per unit
  while (n * (W - 1) > 12) --n;
  double cap = 0.0;
  for (int i = 0; i < n; ++i) {
    Generator g;
    g.id = "O" + std::to_string(i);
    g.klass = GenClass::FastStart;
    g.p_min = uniform(rng, 15, 50);
    g.p_max = g.p_min + uniform(rng, 50, 160);
    g.ramp_rate = uniform(rng, 25, 70);
    g.startup_ramp = g.p_min + uniform(rng, 5, 50);
    g.shutdown_ramp = g.p_min + uniform(rng, 5, 50);
    g.no_load_cost = uniform(rng, 50, 400);
    g.linear_cost = uniform(rng, 5, 60);
    g.startup_cost = uniform(rng, 100, 800);
    g.min_up = 1 + (int)(rng() % 2);
    g.min_down = 1 + (int)(rng() % 2);
    cap += g.p_max;
    inst.gens.push_back(g);
  }
  std::vector<double> nl;
  double base = cap * uniform(rng, 0.4, 0.65);
  for (int t = 0; t < W; ++t)
    nl.push_back(std::max(10.0, base + uniform(rng, -0.12, 0.12) * cap));
  FrcRequirements req;
  for (int t = 0; t + 1 < W; ++t) {
    req.upward.push_back(uniform(rng, 0, 0.05 * cap));
    req.downward.push_back(uniform(rng, 0, 0.05 * cap));
    req.alpha.push_back(0);
  }
  inst.win = uc::WindowSpec{1, nl, req};
  double rest = nl[0] * 0.9;
  for (auto& g : inst.gens) {
    int on = rng() % 2 == 0 ? 1 : 0;
    // first window period stays boundary-fixed (look-ahead convention), so
    // the free bits are exactly the n*(W-1) later commitments
    inst.bc.fixed_commitments[g.id][0] = on;
    inst.bc.fixed_commitments[g.id][1] = on;
    double p = 0.0;
    if (on) {
      p = std::min(g.p_max, std::max(g.p_min, rest));
      rest -= p;
    }
    inst.bc.initial_power[g.id] = p;
  }
  return inst;
}

// brute force: every on/off pattern of the free periods, switch variables
// forced through their logic rows, dispatch by LP
double enumerate_best(const OracleInstance& inst, Formulation f, bool& feasible) {
  const int W = (int)inst.win.net_load.size();
  const int n = (int)inst.gens.size();
  const int bits = n * (W - 1);
  double best = kInf;
  feasible = false;
  uc::BuildOptions opt;
  opt.formulation = f;
  for (long mask = 0; mask < (1L << bits); ++mask) {
    BoundaryCondition bc = inst.bc;
    long m = mask;
    for (int i = 0; i < n; ++i)
      for (int t = 1; t < W; ++t) {
        bc.fixed_commitments[inst.gens[i].id][1 + t] = (int)(m & 1);
        m >>= 1;
      }
    uc::UcModel model(inst.gens, inst.win, bc, opt);
    model.build_base_uc();
    model.add_frc_constraints_conventional();
    if (f == Formulation::Proposed) {
      model.add_negative_frc_fast();
      model.add_requirements_proposed();
    }
    model.add_min_up_down();
    auto out = milp::solve_lp_relaxation(model.problem());
    if (out.status != milp::SolveStatus::Optimal) continue;
    feasible = true;
    best = std::min(best, out.objective);
  }
  return best;
}

void c7_oracle() {
  Timer timer;
  std::mt19937_64 rng(7777);
  int checked = 0, agreed = 0, feasible_count = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng);
    Formulation f = trial % 2 == 0 ? Formulation::Conventional : Formulation::Proposed;
    bool feasible = false;
    double oracle = enumerate_best(inst, f, feasible);

    uc::BuildOptions opt;
    opt.formulation = f;
    uc::UcModel model(inst.gens, inst.win, inst.bc, opt);
    model.build_base_uc();
    model.add_frc_constraints_conventional();
    if (f == Formulation::Proposed) {
      model.add_negative_frc_fast();
      model.add_requirements_proposed();
    }
    model.add_min_up_down();
    milp::BnbOptions bo;
    bo.rel_gap = 1e-9;
    auto res = milp::branch_and_bound(model.problem(), bo);

    ++checked;
    if (!feasible) {
      if (res.status == milp::SolveStatus::Infeasible) ++agreed;
      continue;
    }
    ++feasible_count;
    if (res.status == milp::SolveStatus::Optimal &&
        std::abs(res.objective - oracle) <=
            1e-6 * std::max(1.0, std::abs(oracle)))
      ++agreed;
  }
  double secs = timer.seconds();
  bool pass = checked == 50 && agreed == 50 && feasible_count >= 25 && secs < 600.0;
  std::ostringstream det;
  det << agreed << "/50 agree with enumeration (" << feasible_count
      << " feasible instances)";
  report_line("solver-oracle-equivalence", pass, secs, det.str());
}

// --- criterion 8: feasibility invariants -------------------------------------

void c8_feasibility() {
  Timer timer;
  bool pass = true;
  std::ostringstream det;
  int solves = 0, indicator_checks = 0;
  for (auto f : {Formulation::Conventional, Formulation::Proposed}) {
    auto s = fixtures::toy_study();
    s.config.formulation = f;
    // window models across the roll, result vectors checked directly
    RollingHorizon rh(s);
    for (std::size_t k = 0; k < 3; ++k)
      rh.step(s.series.realized_net_load[k], s.series.forecast_net_load[k]);
    for (const auto& st : rh.log().steps) {
      const auto& sol = st.solution;
      // rebuild the model this solution came from and check the raw vector
      auto alpha = std::vector<double>(3, 30.0);
      NetLoadForecast nl{s.series.forecast_net_load[st.start_period - 1], true};
      auto req = compute_requirements(nl, alpha);
      uc::WindowSpec win{st.start_period,
                         s.series.forecast_net_load[st.start_period - 1], req};
      uc::BuildOptions opt;
      opt.formulation = f;
      opt.allow_shedding = true;
      opt.voll = s.config.voll;
      auto model = uc::UcModel::build_full(s.generators, win, st.boundary, opt);
      auto res = milp::solve_milp(model.problem(), {});
      ++solves;
      auto viols = milp::check_feasibility(model.problem(), res.values, 1e-6);
      if (!viols.empty()) {
        pass = false;
        det << "violations at step " << st.start_period << "; ";
      }
      // negative-contribution indicator logic on the solved vector
      if (f == Formulation::Proposed) {
        auto sol2 = uc::extract_solution(model, res);
        for (std::size_t g = 0; g < s.generators.size(); ++g)
          for (int t = 0; t + 1 < sol2.periods; ++t) {
            if (model.var_nur(g, t) < 0) continue;
            ++indicator_checks;
            if (res.values[model.var_nur(g, t)] > 1e-6 && sol2.z[g][t + 1] != 1)
              pass = false;
            if (res.values[model.var_ndr(g, t)] > 1e-6 && sol2.y[g][t + 1] != 1)
              pass = false;
          }
      }
    }
  }
  det << solves << " window solves clean, " << indicator_checks
      << " indicator checks";
  report_line("feasibility-invariants", pass, timer.seconds(), det.str());
}

// --- criterion 9: fleet-scale directional comparison -------------------------

std::string default_backend_command() {
  const char* env = std::getenv(milp::kExternalSolverEnv);
  if (env && *env) return env;
  if (std::system("python3 -c 'import scipy.optimize' >/dev/null 2>&1") == 0)
    return "python3 " + std::string(FRCUC_SOURCE_DIR) + "/tools/external_solver.py";
  return "";
}

void c9_directional() {
  Timer timer;
  auto s = fixtures::day_ahead54_study();
  milp::SolverOptions so;
  so.rel_gap = 0.01;
  std::string cmd = default_backend_command();
  if (!cmd.empty()) {
    so.backend = milp::Backend::External;
    so.external_command = cmd;
  }
  bool pass = false;
  std::ostringstream det;
  try {
    auto result = run_comparison(s, {3.0}, 100, 118, so, 2);
    const auto& [prop, conv] = result.by_multiplier.at(3.0);
    pass = prop.expected_operating_cost <= conv.expected_operating_cost &&
           prop.shed_event_count <= conv.shed_event_count;
    det << "expected cost " << std::llround(prop.expected_operating_cost) << " vs "
        << std::llround(conv.expected_operating_cost) << " $; shed events "
        << prop.shed_event_count << " vs " << conv.shed_event_count << " ("
        << (cmd.empty() ? "builtin" : "external") << " backend)";
  } catch (const std::exception& e) {
    det << "exception: " << e.what();
  }
  double secs = timer.seconds();
  pass = pass && secs < 1800.0;
  report_line("directional-fleet-comparison", pass, secs, det.str());
}

// --- criterion 10: determinism ------------------------------------------------

void c10_determinism() {
  Timer timer;
  auto once = [] {
    auto s = fixtures::toy_day_ahead_study();
    milp::SolverOptions so;
    so.rel_gap = 1e-6;
    auto result = run_comparison(s, {1.0}, 50, 4242, so, 2);
    std::ostringstream os;
    os << report::comparison_csv(result);
    for (const auto& [k, pair] : result.by_multiplier)
      os << report::evaluation_csv(pair.first) << report::evaluation_csv(pair.second);
    auto t = fixtures::toy_study();
    t.config.formulation = Formulation::Proposed;
    os << report::rolling_log_to_json(run_rolling(t)).dump();
    return os.str();
  };
  std::string a = once();
  std::string b = once();
  bool pass = a == b;
  report_line("deterministic-reports", pass, timer.seconds(),
              pass ? "two runs byte-identical" : "report bytes differ between runs");
}

}  // namespace

int main() {
  std::printf("acceptance checks\n");
  c1_requirements();
  RollingLog conv_log, prop_log;
  c2_c3_windows(conv_log, prop_log);
  c4_non_delivery(conv_log, prop_log);
  c5_audit(conv_log, prop_log);
  c6_sweep();
  c7_oracle();
  c8_feasibility();
  c9_directional();
  c10_determinism();
  std::printf("%d criteria failed\n", failures);
  return failures;
}
