#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "frcuc/common.hpp"

namespace frcuc::milp {

enum class VarKind : std::uint8_t { Continuous, Binary };

enum class Sense : std::uint8_t { LessEqual, Equal, GreaterEqual };

enum class SolveStatus { Optimal, Infeasible, Unbounded, GapLimit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::GapLimit: return "gap-limit";
  }
  return "?";
}

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  VarKind kind = VarKind::Continuous;
};

struct LinearTerm {
  int var = -1;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

// Generic sparse mixed-integer linear program, objective sense: minimize.
class MilpProblem {
 public:
  int add_variable(std::string name, double lower, double upper,
                   VarKind kind = VarKind::Continuous) {
    if (!(lower <= upper))
      throw InvariantError("variable '" + name + "': lower bound " +
                           std::to_string(lower) + " exceeds upper bound " +
                           std::to_string(upper));
    if (kind == VarKind::Binary && (lower < 0.0 || upper > 1.0))
      throw InvariantError("binary variable '" + name + "' has bounds outside [0,1]");
    auto [it, inserted] = name_to_var_.emplace(name, (int)variables_.size());
    if (!inserted) throw InvariantError("duplicate variable name '" + name + "'");
    variables_.push_back(Variable{std::move(name), lower, upper, kind});
    return (int)variables_.size() - 1;
  }

  int add_constraint(std::string name, std::vector<LinearTerm> terms, Sense sense,
                     double rhs) {
    for (const auto& t : terms) check_var(t.var);
    auto [it, inserted] = name_to_con_.emplace(name, (int)constraints_.size());
    if (!inserted) throw InvariantError("duplicate constraint name '" + name + "'");
    constraints_.push_back(Constraint{std::move(name), std::move(terms), sense, rhs});
    return (int)constraints_.size() - 1;
  }

  // Rewrites an existing row in place, keeping its position and name.
  void replace_constraint(int index, std::vector<LinearTerm> terms, Sense sense,
                          double rhs) {
    for (const auto& t : terms) check_var(t.var);
    auto& c = constraints_.at(index);
    c.terms = std::move(terms);
    c.sense = sense;
    c.rhs = rhs;
  }

  void set_objective_term(int var, double coef) {
    check_var(var);
    double& c = objective_[var];
    c += coef;
    if (c == 0.0) objective_.erase(var);
  }

  void replace_objective(std::map<int, double> obj) {
    for (const auto& [v, c] : obj) check_var(v);
    objective_ = std::move(obj);
    objective_offset_ = 0.0;
  }

  void set_bounds(int var, double lower, double upper) {
    check_var(var);
    if (!(lower <= upper))
      throw InvariantError("variable '" + variables_[var].name + "': bound fix " +
                           std::to_string(lower) + " > " + std::to_string(upper));
    variables_[var].lower = lower;
    variables_[var].upper = upper;
  }

  void fix(int var, double value) { set_bounds(var, value, value); }

  int variable_index(const std::string& name) const {
    auto it = name_to_var_.find(name);
    return it == name_to_var_.end() ? -1 : it->second;
  }
  int constraint_index(const std::string& name) const {
    auto it = name_to_con_.find(name);
    return it == name_to_con_.end() ? -1 : it->second;
  }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::map<int, double>& objective() const { return objective_; }
  double objective_offset() const { return objective_offset_; }
  void add_objective_offset(double v) { objective_offset_ += v; }

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }

  std::size_t num_binaries() const {
    std::size_t n = 0;
    for (const auto& v : variables_)
      if (v.kind == VarKind::Binary) ++n;
    return n;
  }

  double objective_value(const std::vector<double>& x) const {
    double v = objective_offset_;
    for (const auto& [j, c] : objective_) v += c * x.at(j);
    return v;
  }

 private:
  void check_var(int var) const {
    if (var < 0 || var >= (int)variables_.size())
      throw InvariantError("constraint references unknown variable index " +
                           std::to_string(var));
  }

  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::map<int, double> objective_;  // ordered for deterministic iteration
  double objective_offset_ = 0.0;
  std::unordered_map<std::string, int> name_to_var_;
  std::unordered_map<std::string, int> name_to_con_;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> values;  // one entry per problem variable
  double objective = kInf;
  double gap = 0.0;
  long node_count = 0;
  long iterations = 0;

  double value(int var) const { return values.at(var); }
};

struct Violation {
  std::string what;
  double magnitude = 0.0;
};

// Checks a candidate point against every row, bound and integrality
// requirement. Anything beyond `tol` is reported with its magnitude.
inline std::vector<Violation> check_feasibility(const MilpProblem& p,
                                                const std::vector<double>& x,
                                                double tol = 1e-6) {
  std::vector<Violation> out;
  if (x.size() != p.num_variables()) {
    out.push_back({"value vector covers " + std::to_string(x.size()) +
                       " of " + std::to_string(p.num_variables()) + " variables",
                   kInf});
    return out;
  }
  const auto& vars = p.variables();
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const auto& v = vars[j];
    if (x[j] < v.lower - tol)
      out.push_back({"bound: " + v.name + " below lower", v.lower - x[j]});
    if (x[j] > v.upper + tol)
      out.push_back({"bound: " + v.name + " above upper", x[j] - v.upper});
    if (v.kind == VarKind::Binary) {
      double frac = std::abs(x[j] - std::round(x[j]));
      if (frac > tol)
        out.push_back({"integrality: " + v.name, frac});
    }
  }
  for (const auto& c : p.constraints()) {
    double act = 0.0;
    for (const auto& t : c.terms) act += t.coef * x[t.var];
    double viol = 0.0;
    switch (c.sense) {
      case Sense::LessEqual: viol = act - c.rhs; break;
      case Sense::GreaterEqual: viol = c.rhs - act; break;
      case Sense::Equal: viol = std::abs(act - c.rhs); break;
    }
    if (viol > tol) out.push_back({"row: " + c.name, viol});
  }
  return out;
}

}  // namespace frcuc::milp
