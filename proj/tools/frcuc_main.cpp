// frcuc command-line front end: solve single windows or day-ahead horizons,
// run rolling-horizon emulations, audit deliverable ramping capability, and
// run Monte Carlo schedule evaluations. Artifacts are deterministic
// functions of (study file, flags, seed).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "frcuc/evaluation.hpp"
#include "frcuc/fixtures.hpp"
#include "frcuc/milp/lp_format.hpp"
#include "frcuc/report.hpp"
#include "frcuc/rolling.hpp"
#include "frcuc/study_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitGapLimit = 5;
constexpr int kExitIo = 6;

namespace fs = std::filesystem;
using namespace frcuc;

struct CommonArgs {
  std::string study_path;
  std::string out_dir = "out";
  std::optional<std::string> formulation;
  std::optional<double> gap;
  std::string backend = "builtin";
  std::string solver_cmd;  // overrides FRCUC_EXTERNAL_SOLVER
};

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_study = true) {
  auto* opt = cmd->add_option("--study", a.study_path, "study file (JSON)");
  if (needs_study) opt->required();
  cmd->add_option("--out", a.out_dir, "output directory");
  cmd->add_option("--formulation", a.formulation,
                  "conventional|proposed (overrides the study file)")
      ->check(CLI::IsMember({"conventional", "proposed"}));
  cmd->add_option("--gap", a.gap, "relative MIP gap");
  cmd->add_option("--backend", a.backend, "builtin|external MILP backend")
      ->check(CLI::IsMember({"builtin", "external"}));
  cmd->add_option("--solver-cmd", a.solver_cmd,
                  "external solver command (else $FRCUC_EXTERNAL_SOLVER)");
}

Study load_study(const CommonArgs& a) {
  Study s = load_system(a.study_path);
  if (a.formulation)
    s.config.formulation = *a.formulation == "proposed" ? Formulation::Proposed
                                                        : Formulation::Conventional;
  if (a.gap) s.config.mip_gap = *a.gap;
  return s;
}

milp::SolverOptions solver_options(const CommonArgs& a, const Study& s) {
  milp::SolverOptions so;
  so.rel_gap = s.config.mip_gap;
  so.backend = a.backend == "external" ? milp::Backend::External : milp::Backend::Builtin;
  so.external_command = a.solver_cmd;
  return so;
}

bool is_rolling_study(const Study& s) {
  return !s.series.forecast_net_load.empty() && !s.series.realized_net_load.empty();
}

// Day-ahead model of the whole horizon at the study's alpha multiplier.
std::pair<uc::UcModel, FrcRequirements> day_ahead_model(const Study& s) {
  auto alpha = study_alpha_series(s, (int)s.forecast.values.size() - 1);
  auto req = compute_requirements(s.forecast, alpha);
  uc::WindowSpec win{1, s.forecast.values, req};
  uc::BuildOptions bopt;
  bopt.formulation = s.config.formulation;
  bopt.allow_shedding = false;
  bopt.voll = s.config.voll;
  return {uc::UcModel::build_full(s.generators, win, s.boundary, bopt), req};
}

// Rolls the study up to (window-1) steps, then returns the model/requirements
// of the requested window so it can be solved or exported standalone.
std::pair<uc::UcModel, FrcRequirements> rolling_window_model(const Study& s, int window) {
  if (window < 1 || window > (int)s.series.forecast_net_load.size())
    throw InvariantError("window " + std::to_string(window) +
                         " outside the study's forecast rows");
  RollingHorizon rh(s);
  for (int k = 0; k + 1 < window; ++k)
    rh.step(s.series.realized_net_load[k], s.series.forecast_net_load[k]);
  // rebuild the requested window against the rolled boundary
  const auto& row = s.series.forecast_net_load[window - 1];
  NetLoadForecast nl{row, true};
  std::vector<double> alpha(row.size() - 1,
                            s.series.alpha_mw ? *s.series.alpha_mw : 0.0);
  if (!s.series.alpha_mw) {
    auto full = study_alpha_series(s, window - 1 + (int)row.size() - 1);
    alpha.assign(full.begin() + (window - 1), full.end());
  }
  auto req = compute_requirements(nl, alpha);
  BoundaryCondition bc = s.boundary;
  if (window > 1) {
    const auto& log = rh.log();
    const auto& last = log.steps.back();
    bc.initial_power = last.realized_dispatch;
    bc.fixed_commitments = last.boundary.fixed_commitments;
    for (std::size_t g = 0; g < s.generators.size(); ++g) {
      const auto& id = s.generators[g].id;
      bc.fixed_commitments[id][last.start_period] = last.solution.x[g][0];
      bc.fixed_commitments[id][last.start_period + 1] = last.solution.x[g][1];
    }
  }
  uc::WindowSpec win{window, row, req};
  uc::BuildOptions bopt;
  bopt.formulation = s.config.formulation;
  bopt.allow_shedding = true;
  bopt.voll = s.config.voll;
  return {uc::UcModel::build_full(s.generators, win, bc, bopt), req};
}

int run_solve(const CommonArgs& a, int window) {
  Study s = load_study(a);
  fs::create_directories(a.out_dir);
  bool rolling = is_rolling_study(s);
  auto [model, req] = rolling ? rolling_window_model(s, window) : day_ahead_model(s);
  auto res = milp::solve_milp(model.problem(), solver_options(a, s));
  if (res.status == milp::SolveStatus::Infeasible ||
      res.status == milp::SolveStatus::Unbounded) {
    std::cerr << "solve: model " << milp::to_string(res.status) << "\n";
    return kExitInfeasible;
  }
  auto sol = uc::extract_solution(model, res);
  std::string tag = "solution_t" + std::to_string(model.window().start_period);
  report::write_text_file((fs::path(a.out_dir) / (tag + ".txt")).string(),
                          report::solution_table(sol, s.config.formulation));
  report::write_text_file((fs::path(a.out_dir) / (tag + ".csv")).string(),
                          report::solution_csv(sol));
  report::write_text_file(
      (fs::path(a.out_dir) / ("requirements_t" +
                              std::to_string(model.window().start_period) + ".csv"))
          .string(),
      report::requirements_csv(model.window().start_period, model.window().net_load, req));
  std::cout << report::solution_table(sol, s.config.formulation);
  return res.status == milp::SolveStatus::GapLimit ? kExitGapLimit : kExitOk;
}

int run_roll(const CommonArgs& a, bool audit_only) {
  Study s = load_study(a);
  if (!is_rolling_study(s))
    throw InvariantError("study has no realized/forecast rolling series");
  fs::create_directories(a.out_dir);
  RollingOptions ro;
  ro.solver = solver_options(a, s);
  auto log = run_rolling(s, ro);
  report::write_text_file((fs::path(a.out_dir) / "audit.csv").string(),
                          report::audit_csv(log));
  if (!audit_only) {
    std::ostringstream tables;
    for (const auto& st : log.steps)
      tables << report::solution_table(st.solution, s.config.formulation) << "\n";
    report::write_text_file((fs::path(a.out_dir) / "roll_steps.txt").string(),
                            tables.str());
    report::write_text_file((fs::path(a.out_dir) / "roll_log.json").string(),
                            report::rolling_log_to_json(log).dump(2) + "\n");
    for (const auto& st : log.steps)
      std::printf("step t=%d realized=%.2f shed=%.2f cost=%.2f\n", st.start_period,
                  st.realized_net_load, st.realized_shed, st.realized_cost);
  } else {
    std::cout << report::audit_csv(log);
  }
  std::printf("total shed %.2f MW, total realized cost %.2f $\n", log.total_shed(),
              log.total_realized_cost());
  return kExitOk;
}

int run_evaluate(const CommonArgs& a, int scenarios, std::uint64_t seed,
                 const std::vector<double>& multipliers, int jobs) {
  Study s = load_study(a);
  fs::create_directories(a.out_dir);
  auto mults = multipliers.empty() ? std::vector<double>{2.8, 3.0, 3.5} : multipliers;
  auto result = run_comparison(s, mults, scenarios, seed, solver_options(a, s), jobs);
  report::emit_report(result, a.out_dir);
  report::write_text_file((fs::path(a.out_dir) / "evaluation_results.json").string(),
                          report::comparison_to_json(result).dump(2) + "\n");
  std::cout << report::comparison_csv(result);
  return kExitOk;
}

int run_export_lp(const CommonArgs& a, int window) {
  Study s = load_study(a);
  fs::create_directories(a.out_dir);
  bool rolling = is_rolling_study(s);
  auto [model, req] = rolling ? rolling_window_model(s, window) : day_ahead_model(s);
  std::string path =
      (fs::path(a.out_dir) /
       ("model_t" + std::to_string(model.window().start_period) + ".lp"))
          .string();
  milp::export_lp_file(model.problem(), path);
  std::cout << "wrote " << path << "\n";
  return kExitOk;
}

int run_report(const std::string& results_path, const std::string& out_dir) {
  std::ifstream is(results_path);
  if (!is) throw ParseError("cannot open results file '" + results_path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("results file: ") + e.what());
  }
  auto result = report::comparison_from_json(j);
  report::emit_report(result, out_dir);
  std::cout << report::comparison_csv(result);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unit commitment with deliverable flexible-ramping capability"};
  app.require_subcommand(1);

  CommonArgs solve_args, roll_args, audit_args, eval_args, export_args;
  int solve_window = 1, export_window = 1;
  int eval_scenarios = 100, eval_jobs = 1;
  std::uint64_t eval_seed = 1;
  std::vector<double> eval_multipliers;
  std::string report_results, report_out = "out";

  auto* c_solve = app.add_subcommand("solve", "solve one window or a day-ahead horizon");
  add_common(c_solve, solve_args);
  c_solve->add_option("--window", solve_window,
                      "window start period for rolling studies");

  auto* c_roll = app.add_subcommand("roll", "run the rolling-horizon emulation");
  add_common(c_roll, roll_args);

  auto* c_audit = app.add_subcommand("audit", "roll and print the deliverability audit");
  add_common(c_audit, audit_args);

  auto* c_eval = app.add_subcommand("evaluate", "Monte Carlo schedule comparison");
  add_common(c_eval, eval_args);
  c_eval->add_option("--scenarios", eval_scenarios, "scenario count");
  c_eval->add_option("--seed", eval_seed, "scenario seed");
  c_eval->add_option("--alpha-multipliers", eval_multipliers,
                     "requirement multipliers (default 2.8 3.0 3.5)");
  c_eval->add_option("--jobs", eval_jobs, "parallel evaluation workers");

  auto* c_export = app.add_subcommand("export-lp", "write the window model as an .lp file");
  add_common(c_export, export_args);
  c_export->add_option("--window", export_window,
                       "window start period for rolling studies");

  auto* c_report = app.add_subcommand("report", "re-emit CSV/plot artifacts from saved results");
  c_report->add_option("--results", report_results, "evaluation_results.json path")
      ->required();
  c_report->add_option("--out", report_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_solve->parsed()) return run_solve(solve_args, solve_window);
    if (c_roll->parsed()) return run_roll(roll_args, false);
    if (c_audit->parsed()) return run_roll(audit_args, true);
    if (c_eval->parsed())
      return run_evaluate(eval_args, eval_scenarios, eval_seed, eval_multipliers,
                          eval_jobs);
    if (c_export->parsed()) return run_export_lp(export_args, export_window);
    if (c_report->parsed()) return run_report(report_results, report_out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
