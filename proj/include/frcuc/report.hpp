#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frcuc/evaluation.hpp"
#include "frcuc/rolling.hpp"

namespace frcuc::report {

namespace detail {

inline std::string num(double v, const char* fmt = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace detail

// Table-style rendering of one window solution: one block per unit with
// commitment, dispatch and ramp-award rows; FRC columns stop one period
// short of the window end (no award leaves the window).
inline std::string solution_table(const uc::UcSolution& s, Formulation f) {
  std::ostringstream os;
  os << "window t=" << s.start_period << " (" << to_string(f) << ")  objective "
     << detail::num(s.objective, "%.2f") << " $  gap "
     << detail::num(100.0 * s.gap, "%.4f") << "%  status " << milp::to_string(s.status)
     << "\n";
  auto cell = [&](const std::string& v) {
    os << ' ';
    for (std::size_t i = v.size(); i < 9; ++i) os << ' ';
    os << v;
  };
  os << "unit   product  ";
  for (int t = 0; t < s.periods; ++t) cell("t=" + std::to_string(s.start_period + t));
  os << "\n";
  bool proposed = f == Formulation::Proposed;
  for (std::size_t g = 0; g < s.gen_ids.size(); ++g) {
    char head[32];
    std::snprintf(head, sizeof(head), "%-6s", s.gen_ids[g].c_str());
    os << head << " on/off   ";
    for (int t = 0; t < s.periods; ++t) cell(std::to_string(s.x[g][t]));
    os << "\n       power    ";
    for (int t = 0; t < s.periods; ++t) cell(detail::num(s.p[g][t], "%.2f"));
    os << "\n       up-ramp  ";
    for (int t = 0; t < s.periods; ++t)
      cell(t + 1 < s.periods ? detail::num(s.ur[g][t], "%.2f") : "-");
    os << "\n       dn-ramp  ";
    for (int t = 0; t < s.periods; ++t)
      cell(t + 1 < s.periods ? detail::num(s.dr[g][t], "%.2f") : "-");
    os << "\n";
    if (proposed) {
      os << "       neg-up   ";
      for (int t = 0; t < s.periods; ++t)
        cell(t + 1 < s.periods ? detail::num(s.nur[g][t] + s.nursd[g][t], "%.2f") : "-");
      os << "\n       neg-dn   ";
      for (int t = 0; t < s.periods; ++t)
        cell(t + 1 < s.periods ? detail::num(s.ndr[g][t] + s.ndrsu[g][t], "%.2f") : "-");
      os << "\n";
    }
  }
  os << "shed [MW]       ";
  for (int t = 0; t < s.periods; ++t) cell(detail::num(s.shed[t], "%.2f"));
  os << "\ncost [k$]       ";
  for (int t = 0; t < s.periods; ++t) cell(detail::num(s.period_cost[t] / 1000.0, "%.2f"));
  os << "\n";
  return os.str();
}

inline std::string solution_csv(const uc::UcSolution& s) {
  std::ostringstream os;
  os << "period,gen,x,y,z,p,pbar,ur,dr,nur,ndr,nursd,ndrsu\n";
  for (int t = 0; t < s.periods; ++t)
    for (std::size_t g = 0; g < s.gen_ids.size(); ++g) {
      bool frc = t + 1 < s.periods;
      os << s.start_period + t << ',' << s.gen_ids[g] << ',' << s.x[g][t] << ','
         << s.y[g][t] << ',' << s.z[g][t] << ',' << detail::num(s.p[g][t]) << ','
         << detail::num(s.pbar[g][t]) << ',' << (frc ? detail::num(s.ur[g][t]) : "")
         << ',' << (frc ? detail::num(s.dr[g][t]) : "") << ','
         << (frc ? detail::num(s.nur[g][t]) : "") << ','
         << (frc ? detail::num(s.ndr[g][t]) : "") << ','
         << (frc ? detail::num(s.nursd[g][t]) : "") << ','
         << (frc ? detail::num(s.ndrsu[g][t]) : "") << "\n";
    }
  return os.str();
}

inline std::string requirements_csv(int start_period, const std::vector<double>& nl,
                                    const FrcRequirements& req) {
  std::ostringstream os;
  os << "period,net_load,alpha,ufrc,dfrc\n";
  for (std::size_t t = 0; t < nl.size(); ++t) {
    os << start_period + (int)t << ',' << detail::num(nl[t]);
    if (t < req.upward.size())
      os << ',' << detail::num(req.alpha[t]) << ',' << detail::num(req.upward[t]) << ','
         << detail::num(req.downward[t]);
    else
      os << ",,,";
    os << "\n";
  }
  return os.str();
}

inline std::string audit_csv(const RollingLog& log) {
  std::ostringstream os;
  os << "step,period,scheduled_up,scheduled_dn,deliverable_up,deliverable_dn,"
        "required_up,required_dn,shortfall\n";
  for (std::size_t i = 0; i < log.audits.size(); ++i)
    for (const auto& r : log.audits[i].rows)
      os << i + 1 << ',' << r.period << ',' << detail::num(r.scheduled_up) << ','
         << detail::num(r.scheduled_dn) << ',' << detail::num(r.deliverable_up) << ','
         << detail::num(r.deliverable_dn) << ',' << detail::num(r.required_up) << ','
         << detail::num(r.required_dn) << ',' << (r.shortfall ? 1 : 0) << "\n";
  return os.str();
}

inline nlohmann::json solution_to_json(const uc::UcSolution& s) {
  nlohmann::json j;
  j["start_period"] = s.start_period;
  j["periods"] = s.periods;
  j["status"] = milp::to_string(s.status);
  j["objective"] = s.objective;
  j["gap"] = s.gap;
  j["node_count"] = s.node_count;
  j["gen_ids"] = s.gen_ids;
  j["x"] = s.x;
  j["y"] = s.y;
  j["z"] = s.z;
  j["p"] = s.p;
  j["pbar"] = s.pbar;
  j["ur"] = s.ur;
  j["dr"] = s.dr;
  j["nur"] = s.nur;
  j["ndr"] = s.ndr;
  j["nursd"] = s.nursd;
  j["ndrsu"] = s.ndrsu;
  j["shed"] = s.shed;
  j["surplus"] = s.surplus;
  j["period_cost"] = s.period_cost;
  return j;
}

inline nlohmann::json rolling_log_to_json(const RollingLog& log) {
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const auto& st = log.steps[i];
    nlohmann::json js;
    js["start_period"] = st.start_period;
    js["realized_net_load"] = st.realized_net_load;
    js["realized_dispatch"] = st.realized_dispatch;
    js["realized_injection"] = st.realized_injection;
    js["realized_shed"] = st.realized_shed;
    js["realized_surplus"] = st.realized_surplus;
    js["realized_cost"] = st.realized_cost;
    js["requirements"]["upward"] = st.requirements.upward;
    js["requirements"]["downward"] = st.requirements.downward;
    js["requirements"]["alpha"] = st.requirements.alpha;
    nlohmann::json jb;
    jb["initial_power"] = st.boundary.initial_power;
    for (const auto& [id, m] : st.boundary.fixed_commitments)
      for (const auto& [t, v] : m)
        jb["fixed_commitments"][id][std::to_string(t)] = v;
    js["boundary"] = jb;
    js["solution"] = solution_to_json(st.solution);
    if (i < log.audits.size()) {
      nlohmann::json ja = nlohmann::json::array();
      for (const auto& r : log.audits[i].rows) {
        nlohmann::json jr;
        jr["period"] = r.period;
        jr["scheduled_up"] = r.scheduled_up;
        jr["scheduled_dn"] = r.scheduled_dn;
        jr["deliverable_up"] = r.deliverable_up;
        jr["deliverable_dn"] = r.deliverable_dn;
        jr["required_up"] = r.required_up;
        jr["required_dn"] = r.required_dn;
        jr["shortfall"] = r.shortfall;
        ja.push_back(jr);
      }
      js["audit"] = ja;
    }
    steps.push_back(js);
  }
  nlohmann::json j;
  j["frcuc_rolling_log"] = 1;
  j["steps"] = steps;
  return j;
}

// --- evaluation artifacts ---------------------------------------------------

inline std::string evaluation_csv(const EvaluationReport& r) {
  std::ostringstream os;
  os << "scenario,generation_cost,shed_mwh,shed_cost,surplus_mwh\n";
  for (std::size_t i = 0; i < r.scenarios.size(); ++i) {
    const auto& sc = r.scenarios[i];
    os << i << ',' << detail::num(sc.generation_cost, "%.2f") << ','
       << detail::num(sc.shed_mwh, "%.4f") << ',' << detail::num(sc.shed_cost, "%.2f")
       << ',' << detail::num(sc.surplus_mwh, "%.4f") << "\n";
  }
  os << "aggregate," << detail::num(r.avg_generation_cost, "%.2f") << ','
     << detail::num(r.avg_shed_cost, "%.2f") << ','
     << detail::num(r.expected_operating_cost, "%.2f") << ',' << r.shed_event_count
     << "\n";
  return os.str();
}

// plot-ready data: one row per (multiplier, formulation)
inline std::string comparison_csv(const ComparisonResult& c) {
  std::ostringstream os;
  os << "alpha_multiplier,formulation,expected_operating_cost,avg_generation_cost,"
        "avg_shed_cost,shed_events,schedule_objective,schedule_status\n";
  for (const auto& [k, pair] : c.by_multiplier) {
    auto row = [&](const char* name, const EvaluationReport& r) {
      os << detail::num(k, "%.3f") << ',' << name << ','
         << detail::num(r.expected_operating_cost, "%.2f") << ','
         << detail::num(r.avg_generation_cost, "%.2f") << ','
         << detail::num(r.avg_shed_cost, "%.2f") << ',' << r.shed_event_count << ','
         << detail::num(r.schedule_objective, "%.2f") << ','
         << milp::to_string(r.schedule_status) << "\n";
    };
    row("proposed", pair.first);
    row("conventional", pair.second);
  }
  return os.str();
}

inline nlohmann::json comparison_to_json(const ComparisonResult& c) {
  nlohmann::json j;
  j["frcuc_evaluation"] = 1;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [k, pair] : c.by_multiplier) {
    auto rep = [&](const EvaluationReport& r) {
      nlohmann::json jr;
      jr["schedule_status"] = milp::to_string(r.schedule_status);
      jr["schedule_objective"] = r.schedule_objective;
      jr["avg_generation_cost"] = r.avg_generation_cost;
      jr["avg_shed_cost"] = r.avg_shed_cost;
      jr["expected_operating_cost"] = r.expected_operating_cost;
      jr["shed_events"] = r.shed_event_count;
      nlohmann::json sc = nlohmann::json::array();
      for (const auto& o : r.scenarios) {
        nlohmann::json js;
        js["generation_cost"] = o.generation_cost;
        js["shed_mwh"] = o.shed_mwh;
        js["shed_cost"] = o.shed_cost;
        js["surplus_mwh"] = o.surplus_mwh;
        sc.push_back(js);
      }
      jr["scenarios"] = sc;
      return jr;
    };
    nlohmann::json entry;
    entry["alpha_multiplier"] = k;
    entry["proposed"] = rep(pair.first);
    entry["conventional"] = rep(pair.second);
    arr.push_back(entry);
  }
  j["results"] = arr;
  return j;
}

inline ComparisonResult comparison_from_json(const nlohmann::json& j) {
  if (!j.contains("frcuc_evaluation"))
    throw ParseError("not an evaluation results file");
  ComparisonResult c;
  for (const auto& entry : j.at("results")) {
    auto rep = [&](const nlohmann::json& jr) {
      EvaluationReport r;
      std::string st = jr.at("schedule_status").get<std::string>();
      r.schedule_status = st == "optimal" ? milp::SolveStatus::Optimal
                          : st == "gap-limit" ? milp::SolveStatus::GapLimit
                          : st == "unbounded" ? milp::SolveStatus::Unbounded
                                              : milp::SolveStatus::Infeasible;
      r.schedule_objective = jr.at("schedule_objective").get<double>();
      for (const auto& js : jr.at("scenarios")) {
        ScenarioOutcome o;
        o.generation_cost = js.at("generation_cost").get<double>();
        o.shed_mwh = js.at("shed_mwh").get<double>();
        o.shed_cost = js.at("shed_cost").get<double>();
        o.surplus_mwh = js.at("surplus_mwh").get<double>();
        r.scenarios.push_back(o);
      }
      r.aggregate();
      return r;
    };
    double k = entry.at("alpha_multiplier").get<double>();
    c.by_multiplier.emplace(
        k, std::make_pair(rep(entry.at("proposed")), rep(entry.at("conventional"))));
  }
  return c;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw IoError("write failed for '" + path + "'");
}

// Emits the evaluation artifact set: per-formulation per-multiplier scenario
// CSVs plus the plot-data summary. Deterministic bytes for fixed inputs.
inline std::vector<std::string> emit_report(const ComparisonResult& c,
                                            const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  for (const auto& [k, pair] : c.by_multiplier) {
    char tag[32];
    std::snprintf(tag, sizeof(tag), "k%.3f", k);
    for (auto [name, rep] : {std::pair<const char*, const EvaluationReport*>{
                                 "proposed", &pair.first},
                             {"conventional", &pair.second}}) {
      std::string p = (fs::path(out_dir) /
                       ("evaluation_" + std::string(tag) + "_" + name + ".csv"))
                          .string();
      write_text_file(p, evaluation_csv(*rep));
      written.push_back(p);
    }
  }
  std::string p = (fs::path(out_dir) / "comparison.csv").string();
  write_text_file(p, comparison_csv(c));
  written.push_back(p);
  return written;
}

}  // namespace frcuc::report
