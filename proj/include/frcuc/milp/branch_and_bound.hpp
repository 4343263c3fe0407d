#pragma once

#include <cmath>
#include <queue>
#include <vector>

#include "frcuc/milp/problem.hpp"
#include "frcuc/milp/simplex.hpp"

namespace frcuc::milp {

struct BnbOptions {
  double rel_gap = 1e-3;     // stop once (incumbent - bound)/|incumbent| is below
  double int_tol = 1e-6;     // integrality tolerance on binary values
  long max_nodes = 500000;   // deterministic budget; exceeding -> gap-limit
  bool root_dive = true;     // rounding dive for an early incumbent
  SimplexOptions lp;
};

// Best-bound branch and bound over the binary variables of a MilpProblem.
// Branching picks the most fractional binary (ties by lowest variable
// index); node selection pops the lowest parent bound (ties by node id).
// Everything is index-ordered, so repeated runs produce identical results.
class BranchAndBound {
 public:
  BranchAndBound(const MilpProblem& p, BnbOptions opts = {})
      : prob_(p), opts_(opts), solver_(p, opts.lp) {
    for (std::size_t j = 0; j < p.num_variables(); ++j)
      if (p.variables()[j].kind == VarKind::Binary) binaries_.push_back((int)j);
    root_lo_.reserve(p.num_variables());
    root_up_.reserve(p.num_variables());
    for (const auto& v : p.variables()) {
      root_lo_.push_back(v.lower);
      root_up_.push_back(v.upper);
    }
  }

  double root_bound() const { return root_bound_; }

  SolveResult run() {
    LpOutcome root = solver_.solve(&root_lo_, &root_up_, nullptr);
    total_iterations_ += root.iterations;
    ++nodes_solved_;
    if (root.status == SolveStatus::Unbounded) {
      SolveResult res;
      res.status = SolveStatus::Unbounded;
      res.node_count = nodes_solved_;
      return res;
    }
    if (root.status != SolveStatus::Optimal) return finish(SolveStatus::Infeasible, kInf);
    root_bound_ = root.objective;
    basis_ = root.statuses;

    if (integral(root.x)) {
      offer_incumbent(root.x, root.objective);
      return finish(SolveStatus::Optimal, root.objective);
    }

    if (opts_.root_dive) dive(root);

    nodes_.push_back(Node{-1, -1, 0.0, root.objective});
    open_.push({root.objective, 0});

    while (!open_.empty()) {
      if (nodes_solved_ >= opts_.max_nodes) break;
      auto [bound, id] = open_.top();
      if (have_incumbent_) {
        double gap = relative_gap(incumbent_obj_, bound);
        if (gap <= opts_.rel_gap) {
          // best-bound node already proves the target gap
          return finish(SolveStatus::Optimal, bound);
        }
      }
      open_.pop();
      if (have_incumbent_ && bound >= incumbent_obj_ - prune_eps()) continue;

      expand(id);
    }

    if (open_.empty()) {
      if (have_incumbent_) return finish(SolveStatus::Optimal, incumbent_obj_);
      return finish(SolveStatus::Infeasible, kInf);
    }
    // budget exhausted
    double bound = open_.top().first;
    return finish(SolveStatus::GapLimit, bound);
  }

 private:
  struct Node {
    int parent;
    int branch_var;   // -1 at the root
    double fix_value; // 0 or 1
    double bound;     // parent LP objective when created, own after solve
  };

  double prune_eps() const {
    return 1e-9 * (1.0 + std::abs(incumbent_obj_));
  }

  static double relative_gap(double incumbent, double bound) {
    if (!std::isfinite(incumbent)) return kInf;
    return (incumbent - bound) / std::max(1e-10, std::abs(incumbent));
  }

  bool integral(const std::vector<double>& x) const {
    for (int j : binaries_)
      if (std::abs(x[j] - std::round(x[j])) > opts_.int_tol) return false;
    return true;
  }

  // |x - round(x)| equals min(frac, 1-frac) for values in [0,1]; any value
  // beyond int_tol is branchable, keeping this consistent with integral().
  int most_fractional(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = opts_.int_tol;
    for (int j : binaries_) {
      double f = std::abs(x[j] - std::round(x[j]));
      if (f > best_frac) {
        best_frac = f;
        best = j;
      }
    }
    return best;
  }

  void path_bounds(int id, std::vector<double>& lo, std::vector<double>& up) const {
    lo = root_lo_;
    up = root_up_;
    for (int cur = id; cur >= 0; cur = nodes_[cur].parent) {
      const Node& nd = nodes_[cur];
      if (nd.branch_var < 0) continue;
      lo[nd.branch_var] = std::max(lo[nd.branch_var], nd.fix_value);
      up[nd.branch_var] = std::min(up[nd.branch_var], nd.fix_value);
    }
  }

  void offer_incumbent(const std::vector<double>& x, double obj) {
    if (!have_incumbent_ || obj < incumbent_obj_) {
      have_incumbent_ = true;
      incumbent_obj_ = obj;
      incumbent_ = x;
    }
  }

  // Rounding dive from the root relaxation: fix the most fractional binary
  // to its nearest value and re-solve until integral; an infeasible fixing
  // is repaired once by flipping to the other bound. Produces an early
  // incumbent; the tree search below retains all correctness.
  void dive(const LpOutcome& root) {
    std::vector<double> lo = root_lo_, up = root_up_;
    LpOutcome cur = root;
    for (std::size_t step = 0; step < binaries_.size(); ++step) {
      if (integral(cur.x)) {
        offer_incumbent(cur.x, cur.objective);
        return;
      }
      int j = most_fractional(cur.x);
      if (j < 0) return;
      double v = std::round(cur.x[j]);
      lo[j] = v;
      up[j] = v;
      auto prev_basis = cur.statuses;
      cur = solver_.solve(&lo, &up, &prev_basis);
      total_iterations_ += cur.iterations;
      ++nodes_solved_;
      if (cur.status != SolveStatus::Optimal) {
        lo[j] = 1.0 - v;
        up[j] = 1.0 - v;
        cur = solver_.solve(&lo, &up, &prev_basis);
        total_iterations_ += cur.iterations;
        ++nodes_solved_;
        if (cur.status != SolveStatus::Optimal) return;
      }
    }
    if (cur.status == SolveStatus::Optimal && integral(cur.x))
      offer_incumbent(cur.x, cur.objective);
  }

  void expand(int id) {
    std::vector<double> lo, up;
    path_bounds(id, lo, up);
    LpOutcome out = solver_.solve(&lo, &up, &basis_);
    total_iterations_ += out.iterations;
    ++nodes_solved_;
    if (out.status == SolveStatus::Unbounded)
      throw SolverError("node relaxation unbounded under restricted bounds");
    if (out.status != SolveStatus::Optimal) return;  // infeasible subtree
    basis_ = out.statuses;
    nodes_[id].bound = out.objective;
    if (have_incumbent_ && out.objective >= incumbent_obj_ - prune_eps()) return;
    int j = most_fractional(out.x);
    if (j < 0) {
      offer_incumbent(out.x, out.objective);
      return;
    }
    for (double v : {0.0, 1.0}) {
      nodes_.push_back(Node{id, j, v, out.objective});
      open_.push({out.objective, (int)nodes_.size() - 1});
    }
  }

  SolveResult finish(SolveStatus status, double bound) {
    SolveResult res;
    res.node_count = nodes_solved_;
    res.iterations = total_iterations_;
    if (!have_incumbent_) {
      res.status = status == SolveStatus::Optimal ? SolveStatus::Infeasible : status;
      res.objective = kInf;
      res.gap = kInf;
      return res;
    }
    res.status = status;
    res.values = incumbent_;
    res.objective = incumbent_obj_;
    res.gap = std::max(0.0, relative_gap(incumbent_obj_, bound));
    return res;
  }

  const MilpProblem& prob_;
  BnbOptions opts_;
  SimplexSolver solver_;
  std::vector<int> binaries_;
  std::vector<double> root_lo_, root_up_;

  std::vector<Node> nodes_;
  // min-heap on (bound, id); lower id wins ties for determinism
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open_;

  std::vector<VarStatus> basis_;
  bool have_incumbent_ = false;
  double incumbent_obj_ = kInf;
  std::vector<double> incumbent_;
  double root_bound_ = -kInf;
  long nodes_solved_ = 0;
  long total_iterations_ = 0;
};

inline SolveResult branch_and_bound(const MilpProblem& p, const BnbOptions& opts = {}) {
  BranchAndBound bb(p, opts);
  return bb.run();
}

}  // namespace frcuc::milp
