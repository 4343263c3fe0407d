#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "frcuc/milp/branch_and_bound.hpp"
#include "frcuc/milp/lp_format.hpp"
#include "frcuc/milp/problem.hpp"

namespace frcuc::milp {

enum class Backend { Builtin, External };

inline constexpr const char* kExternalSolverEnv = "FRCUC_EXTERNAL_SOLVER";

struct SolverOptions {
  Backend backend = Backend::Builtin;
  double rel_gap = 1e-3;
  long max_nodes = 500000;
  // command invoked as: <command> <model.lp> <solution.out> <rel_gap>
  // empty -> taken from the FRCUC_EXTERNAL_SOLVER environment variable
  std::string external_command;
  std::string work_dir;  // scratch area for external solves; empty -> system temp
};

inline std::string external_command_or_env(const std::string& explicit_cmd) {
  if (!explicit_cmd.empty()) return explicit_cmd;
  const char* env = std::getenv(kExternalSolverEnv);
  return env ? env : "";
}

// Runs the configured external MILP backend on an exported LP file and reads
// back the key=value solution. The result must check out feasible against
// the original problem, otherwise the backend is rejected loudly.
inline SolveResult solve_external(const MilpProblem& p, const SolverOptions& opts) {
  std::string cmd = external_command_or_env(opts.external_command);
  if (cmd.empty())
    throw SolverError("external backend requested but no solver command set (flag or " +
                      std::string(kExternalSolverEnv) + ")");

  static std::atomic<unsigned> counter{0};
  namespace fs = std::filesystem;
  fs::path dir = opts.work_dir.empty() ? fs::temp_directory_path()
                                       : fs::path(opts.work_dir);
  fs::create_directories(dir);
  unsigned id = counter++;
  fs::path lp_path = dir / ("frcuc_model_" + std::to_string(::getpid()) + "_" +
                            std::to_string(id) + ".lp");
  fs::path sol_path = dir / ("frcuc_sol_" + std::to_string(::getpid()) + "_" +
                             std::to_string(id) + ".txt");

  auto names = export_lp_file(p, lp_path.string());
  std::unordered_map<std::string, int> index;
  for (std::size_t j = 0; j < names.size(); ++j) index.emplace(names[j], (int)j);

  std::ostringstream full;
  full << cmd << " \"" << lp_path.string() << "\" \"" << sol_path.string() << "\" "
       << detail::fmt_num(opts.rel_gap);
  int rc = std::system(full.str().c_str());
  if (rc != 0)
    throw SolverError("external solver exited with status " + std::to_string(rc));

  std::ifstream is(sol_path);
  if (!is) throw SolverError("external solver produced no solution file");

  SolveResult res;
  res.values.assign(p.num_variables(), 0.0);
  bool have_status = false;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    if (key == "status") {
      have_status = true;
      if (val == "optimal") res.status = SolveStatus::Optimal;
      else if (val == "infeasible") res.status = SolveStatus::Infeasible;
      else if (val == "unbounded") res.status = SolveStatus::Unbounded;
      else if (val == "gap-limit") res.status = SolveStatus::GapLimit;
      else throw SolverError("external solver: unknown status '" + val + "'");
    } else if (key == "objective") {
      res.objective = std::strtod(val.c_str(), nullptr);
    } else if (key == "gap") {
      res.gap = std::strtod(val.c_str(), nullptr);
    } else if (key == "nodes") {
      res.node_count = std::strtol(val.c_str(), nullptr, 10);
    } else if (key.rfind("var.", 0) == 0) {
      auto it = index.find(key.substr(4));
      if (it == index.end())
        throw SolverError("external solver: unknown variable '" + key.substr(4) + "'");
      res.values[it->second] = std::strtod(val.c_str(), nullptr);
    }
  }
  if (!have_status) throw SolverError("external solver: solution file lacks status=");

  if (res.status == SolveStatus::Optimal || res.status == SolveStatus::GapLimit) {
    auto viols = check_feasibility(p, res.values, 1e-6);
    if (!viols.empty()) {
      std::ostringstream msg;
      msg << "external solution fails feasibility check (" << viols.size()
          << " violations; first: " << viols[0].what << " by " << viols[0].magnitude
          << ")";
      throw SolverError(msg.str());
    }
  }
  std::error_code ec;
  fs::remove(lp_path, ec);
  fs::remove(sol_path, ec);
  return res;
}

inline SolveResult solve_milp(const MilpProblem& p, const SolverOptions& opts = {}) {
  if (opts.backend == Backend::External) return solve_external(p, opts);
  BnbOptions b;
  b.rel_gap = opts.rel_gap;
  b.max_nodes = opts.max_nodes;
  return branch_and_bound(p, b);
}

}  // namespace frcuc::milp
