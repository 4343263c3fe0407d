#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "frcuc/milp/problem.hpp"

namespace frcuc::milp {

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };

struct SimplexOptions {
  double feas_tol = 1e-7;   // bound violation tolerance (scaled by bound size)
  double opt_tol = 1e-7;    // reduced-cost tolerance (scaled by cost size)
  double pivot_tol = 1e-9;  // smallest acceptable pivot element
  long max_iterations = 2000000;
  int refactor_interval = 100;
  int degenerate_limit = 500;  // consecutive degenerate pivots before Bland
};

struct LpOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> x;       // structural variable values
  double objective = kInf;
  std::vector<double> duals;          // one per row
  std::vector<double> reduced_costs;  // one per structural variable
  std::vector<VarStatus> statuses;    // structural + slack, reusable as warm start
  long iterations = 0;
};

// Bounded-variable revised primal simplex over the computational form
//   [A I] [x; s] = rhs,  lo <= (x, s) <= up,
// where each row's sense is encoded in the slack bounds. The basis inverse
// is kept as a sparse LU factorization plus a product-form eta file that is
// periodically collapsed by refactorization. Phase 1 minimizes the sum of
// bound infeasibilities of the basic variables (composite method); phase 2
// prices with Dantzig's rule and falls back to Bland's rule after a run of
// degenerate pivots, so termination does not rely on nondegeneracy.
class SimplexSolver {
 public:
  explicit SimplexSolver(const MilpProblem& p, SimplexOptions opts = {})
      : prob_(p), opts_(opts), n_((int)p.num_variables()),
        m_((int)p.num_constraints()) {
    build_matrix();
  }

  int num_rows() const { return m_; }
  int num_structural() const { return n_; }

  LpOutcome solve(const std::vector<double>* lb_override = nullptr,
                  const std::vector<double>* ub_override = nullptr,
                  const std::vector<VarStatus>* warm = nullptr,
                  const std::vector<double>* rhs_override = nullptr) {
    if (rhs_override) {
      if (rhs_override->size() != (std::size_t)m_)
        throw InvariantError("rhs override size mismatch");
      rhs_ = *rhs_override;
    }
    setup_bounds(lb_override, ub_override);
    setup_basis(warm);
    LpOutcome out;
    out.status = iterate();
    out.iterations = iterations_;
    out.statuses = status_;
    if (out.status == SolveStatus::Optimal) {
      out.x.assign(x_.begin(), x_.begin() + n_);
      out.objective = prob_.objective_value(out.x);
      out.duals = last_duals_;
      out.reduced_costs.resize(n_);
      for (int j = 0; j < n_; ++j) out.reduced_costs[j] = last_d_[j];
    }
    return out;
  }

 private:
  using SpMat = Eigen::SparseMatrix<double>;

  // --- problem data in computational form -------------------------------

  void build_matrix() {
    cost_.assign(n_ + m_, 0.0);
    for (const auto& [j, c] : prob_.objective()) cost_[j] = c;

    // structural columns in CSC layout
    col_start_.assign(n_ + 1, 0);
    const auto& cons = prob_.constraints();
    rhs_.resize(m_);
    std::vector<int> counts(n_, 0);
    std::size_t nnz = 0;
    for (const auto& c : cons) {
      for (const auto& t : c.terms) {
        ++counts[t.var];
        ++nnz;
      }
    }
    for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + counts[j];
    row_idx_.resize(nnz);
    val_.resize(nnz);
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (int i = 0; i < m_; ++i) {
      rhs_[i] = cons[i].rhs;
      for (const auto& t : cons[i].terms) {
        int pos = fill[t.var]++;
        row_idx_[pos] = i;
        val_[pos] = t.coef;
      }
    }
  }

  void setup_bounds(const std::vector<double>* lb, const std::vector<double>* ub) {
    lo_.assign(n_ + m_, 0.0);
    up_.assign(n_ + m_, 0.0);
    const auto& vars = prob_.variables();
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lb ? (*lb)[j] : vars[j].lower;
      up_[j] = ub ? (*ub)[j] : vars[j].upper;
    }
    const auto& cons = prob_.constraints();
    for (int i = 0; i < m_; ++i) {
      switch (cons[i].sense) {
        case Sense::LessEqual: lo_[n_ + i] = 0.0; up_[n_ + i] = kInf; break;
        case Sense::GreaterEqual: lo_[n_ + i] = -kInf; up_[n_ + i] = 0.0; break;
        case Sense::Equal: lo_[n_ + i] = 0.0; up_[n_ + i] = 0.0; break;
      }
    }
  }

  void setup_basis(const std::vector<VarStatus>* warm) {
    status_.assign(n_ + m_, VarStatus::AtLower);
    if (warm && warm->size() == status_.size()) {
      status_ = *warm;
      int basics = 0;
      for (auto s : status_)
        if (s == VarStatus::Basic) ++basics;
      if (basics == m_) {
        normalize_nonbasic_statuses();
        rebuild_head_and_values();
        return;
      }
    }
    // cold start: slack basis
    for (int j = 0; j < n_; ++j) status_[j] = initial_nonbasic_status(j);
    for (int i = 0; i < m_; ++i) status_[n_ + i] = VarStatus::Basic;
    rebuild_head_and_values();
  }

  VarStatus initial_nonbasic_status(int j) const {
    if (lo_[j] > -kInf) return VarStatus::AtLower;
    if (up_[j] < kInf) return VarStatus::AtUpper;
    return VarStatus::FreeZero;
  }

  // A warm-start status can point at a bound that no longer exists after a
  // bound override (e.g. a binary fixed the other way); snap those.
  void normalize_nonbasic_statuses() {
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::Basic) continue;
      if (status_[j] == VarStatus::AtLower && lo_[j] <= -kInf)
        status_[j] = up_[j] < kInf ? VarStatus::AtUpper : VarStatus::FreeZero;
      else if (status_[j] == VarStatus::AtUpper && up_[j] >= kInf)
        status_[j] = lo_[j] > -kInf ? VarStatus::AtLower : VarStatus::FreeZero;
      else if (status_[j] == VarStatus::FreeZero && (lo_[j] > -kInf || up_[j] < kInf))
        status_[j] = lo_[j] > -kInf ? VarStatus::AtLower : VarStatus::AtUpper;
    }
  }

  void rebuild_head_and_values() {
    head_.clear();
    head_.reserve(m_);
    for (int j = 0; j < n_ + m_; ++j)
      if (status_[j] == VarStatus::Basic) head_.push_back(j);
    x_.assign(n_ + m_, 0.0);
    for (int j = 0; j < n_ + m_; ++j) {
      switch (status_[j]) {
        case VarStatus::AtLower: x_[j] = lo_[j]; break;
        case VarStatus::AtUpper: x_[j] = up_[j]; break;
        default: x_[j] = 0.0; break;
      }
    }
    try {
      factorize();
    } catch (const SolverError&) {
      // A warm basis can be singular after bound fixings; restart cold.
      for (int j = 0; j < n_; ++j) status_[j] = initial_nonbasic_status(j);
      for (int i = 0; i < m_; ++i) status_[n_ + i] = VarStatus::Basic;
      head_.clear();
      for (int i = 0; i < m_; ++i) head_.push_back(n_ + i);
      for (int j = 0; j < n_ + m_; ++j) {
        switch (status_[j]) {
          case VarStatus::AtLower: x_[j] = lo_[j]; break;
          case VarStatus::AtUpper: x_[j] = up_[j]; break;
          default: x_[j] = 0.0; break;
        }
      }
      factorize();
    }
    compute_basic_values();
  }

  // --- basis factorization and FTRAN/BTRAN ------------------------------

  void factorize() {
    std::vector<Eigen::Triplet<double>> trips;
    for (int k = 0; k < m_; ++k) {
      int j = head_[k];
      if (j >= n_) {
        trips.emplace_back(j - n_, k, 1.0);
      } else {
        for (int pos = col_start_[j]; pos < col_start_[j + 1]; ++pos)
          trips.emplace_back(row_idx_[pos], k, val_[pos]);
      }
    }
    SpMat B(m_, m_);
    B.setFromTriplets(trips.begin(), trips.end());
    lu_.analyzePattern(B);
    lu_.factorize(B);
    if (lu_.info() != Eigen::Success)
      throw SolverError("basis factorization failed (singular basis)");
    etas_.clear();
    eta_nnz_ = 0;
    pivots_since_refactor_ = 0;
  }

  struct Eta {
    int p;                                   // pivot position in the basis
    double wp;                               // pivot element
    std::vector<std::pair<int, double>> w;   // remaining nonzeros of the column
  };

  void ftran(Eigen::VectorXd& v) const {
    v = lu_.solve(v);
    for (const auto& e : etas_) {
      double alpha = v[e.p] / e.wp;
      if (alpha != 0.0)
        for (const auto& [i, wi] : e.w) v[i] -= alpha * wi;
      v[e.p] = alpha;
    }
  }

  // non-const: Eigen's SparseLU::transpose() view requires a mutable solver
  void btran(Eigen::VectorXd& u) {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double dot = it->wp * u[it->p];
      for (const auto& [i, wi] : it->w) dot += wi * u[i];
      u[it->p] -= (dot - u[it->p]) / it->wp;
    }
    u = lu_.transpose().solve(u);
  }

  void compute_basic_values() {
    Eigen::VectorXd r(m_);
    for (int i = 0; i < m_; ++i) r[i] = rhs_[i];
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::Basic || x_[j] == 0.0) continue;
      if (j >= n_) {
        r[j - n_] -= x_[j];
      } else {
        for (int pos = col_start_[j]; pos < col_start_[j + 1]; ++pos)
          r[row_idx_[pos]] -= val_[pos] * x_[j];
      }
    }
    ftran(r);
    for (int k = 0; k < m_; ++k) x_[head_[k]] = r[k];
  }

  // --- tolerances --------------------------------------------------------

  double bound_tol(double b) const {
    return opts_.feas_tol * (1.0 + std::abs(b));
  }
  bool below_lower(int j) const {
    return lo_[j] > -kInf && x_[j] < lo_[j] - bound_tol(lo_[j]);
  }
  bool above_upper(int j) const {
    return up_[j] < kInf && x_[j] > up_[j] + bound_tol(up_[j]);
  }

  double total_infeasibility() const {
    double s = 0.0;
    for (int k = 0; k < m_; ++k) {
      int j = head_[k];
      if (below_lower(j)) s += lo_[j] - x_[j];
      else if (above_upper(j)) s += x_[j] - up_[j];
    }
    return s;
  }

  // --- main loop ---------------------------------------------------------

  SolveStatus iterate() {
    iterations_ = 0;
    degenerate_run_ = 0;
    bland_ = false;
    int refresh_rounds = 0;
    Eigen::VectorXd y(m_), w(m_);
    last_d_.assign(n_ + m_, 0.0);

    while (true) {
      if (++iterations_ > opts_.max_iterations)
        throw SolverError("simplex iteration limit exceeded");

      bool phase1 = total_infeasibility() > 0.0;

      // duals for the current phase costs
      for (int k = 0; k < m_; ++k) {
        int j = head_[k];
        if (phase1) {
          if (below_lower(j)) y[k] = -1.0;
          else if (above_upper(j)) y[k] = 1.0;
          else y[k] = 0.0;
        } else {
          y[k] = cost_[j];
        }
      }
      btran(y);

      int q = price(y, phase1);
      if (q < 0) {
        if (phase1) {
          // Phase-1 optimal but still infeasible -> LP infeasible. Confirm
          // against a fresh factorization before declaring it.
          if (refresh_rounds < 3) {
            ++refresh_rounds;
            factorize();
            compute_basic_values();
            continue;
          }
          return SolveStatus::Infeasible;
        }
        // candidate optimum: refresh and re-verify
        if (refresh_rounds < 3) {
          ++refresh_rounds;
          factorize();
          compute_basic_values();
          if (total_infeasibility() > 0.0) continue;
          for (int k = 0; k < m_; ++k) y[k] = cost_[head_[k]];
          btran(y);
          if (price(y, false) >= 0) continue;
        }
        finalize_duals(y);
        return SolveStatus::Optimal;
      }

      int dir = entering_direction(q, phase1 ? phase1_dj_ : last_d_[q]);

      // w = B^-1 a_q
      w.setZero();
      if (q >= n_) w[q - n_] = 1.0;
      else
        for (int pos = col_start_[q]; pos < col_start_[q + 1]; ++pos)
          w[row_idx_[pos]] = val_[pos];
      ftran(w);

      RatioResult rr = ratio_test(q, dir, w, phase1);
      if (rr.unbounded) {
        if (phase1)
          throw SolverError("phase-1 ray: inconsistent pricing");
        return SolveStatus::Unbounded;
      }

      apply_step(q, dir, rr, w);
      if (rr.theta <= 1e-12) {
        if (++degenerate_run_ >= opts_.degenerate_limit) bland_ = true;
      } else {
        degenerate_run_ = 0;
        bland_ = false;
      }
    }
  }

  // Reduced cost of column j against duals y.
  double reduced_cost(const Eigen::VectorXd& y, int j, bool phase1) const {
    double c = phase1 ? 0.0 : cost_[j];
    if (j >= n_) return c - y[j - n_];
    double dot = 0.0;
    for (int pos = col_start_[j]; pos < col_start_[j + 1]; ++pos)
      dot += val_[pos] * y[row_idx_[pos]];
    return c - dot;
  }

  // Returns the entering column, or -1 if none is eligible.
  int price(const Eigen::VectorXd& y, bool phase1) {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::Basic) continue;
      if (lo_[j] == up_[j]) continue;  // fixed, cannot move
      double d = reduced_cost(y, j, phase1);
      double tol = opts_.opt_tol * (1.0 + (phase1 ? 1.0 : std::abs(cost_[j])));
      bool eligible = false;
      switch (status_[j]) {
        case VarStatus::AtLower: eligible = d < -tol; break;
        case VarStatus::AtUpper: eligible = d > tol; break;
        case VarStatus::FreeZero: eligible = std::abs(d) > tol; break;
        default: break;
      }
      if (!eligible) continue;
      if (bland_) {  // smallest index wins
        last_d_[j] = d;
        if (phase1) phase1_dj_ = d;
        return j;
      }
      double score = std::abs(d);
      if (score > best_score + 1e-15) {
        best_score = score;
        best = j;
        if (phase1) phase1_dj_ = d;
        last_d_[j] = d;
      }
    }
    if (best >= 0 && phase1) {
      // recompute for the selected column (phase1_dj_ may hold a later candidate's value)
      phase1_dj_ = reduced_cost(y, best, true);
    }
    return best;
  }

  static int sign_dir(double d) { return d < 0.0 ? +1 : -1; }

  int entering_direction(int q, double d) const {
    switch (status_[q]) {
      case VarStatus::AtLower: return +1;
      case VarStatus::AtUpper: return -1;
      default: return sign_dir(d);
    }
  }

  struct RatioResult {
    double theta = kInf;
    int leaving_pos = -1;     // position in basis, -1 for a bound flip
    bool leaving_to_upper = false;
    bool unbounded = false;
  };

  RatioResult ratio_test(int q, int dir, const Eigen::VectorXd& w, bool phase1) {
    RatioResult rr;
    double flip = (lo_[q] > -kInf && up_[q] < kInf) ? up_[q] - lo_[q] : kInf;
    rr.theta = flip;

    // pass 1: minimum ratio
    for (int k = 0; k < m_; ++k) {
      double g = -dir * w[k];  // basic value moves by +theta * g
      if (std::abs(g) <= opts_.pivot_tol) continue;
      int j = head_[k];
      double t = kInf;
      if (phase1 && below_lower(j)) {
        if (g > 0.0) t = (lo_[j] - x_[j]) / g;      // rises to its lower bound
      } else if (phase1 && above_upper(j)) {
        if (g < 0.0) t = (up_[j] - x_[j]) / g;      // falls to its upper bound
      } else if (g > 0.0) {
        if (up_[j] < kInf) t = (up_[j] - x_[j]) / g;
      } else {
        if (lo_[j] > -kInf) t = (lo_[j] - x_[j]) / g;
      }
      if (t < 0.0) t = 0.0;
      if (t < rr.theta) rr.theta = t;
    }
    if (rr.theta == kInf) {
      rr.unbounded = true;
      return rr;
    }

    // pass 2: among blockers within a small tolerance of the minimum,
    // prefer the largest pivot element (stability); under Bland's rule,
    // take the smallest variable index at the exact minimum instead.
    double window = bland_ ? rr.theta * (1.0 + 1e-12) + 1e-15
                           : rr.theta + 1e-9 * (1.0 + rr.theta);
    double best_pivot = 0.0;
    for (int k = 0; k < m_; ++k) {
      double g = -dir * w[k];
      if (std::abs(g) <= opts_.pivot_tol) continue;
      int j = head_[k];
      double t = kInf;
      bool to_upper = false;
      if (phase1 && below_lower(j)) {
        if (g > 0.0) { t = (lo_[j] - x_[j]) / g; to_upper = false; }
      } else if (phase1 && above_upper(j)) {
        if (g < 0.0) { t = (up_[j] - x_[j]) / g; to_upper = true; }
      } else if (g > 0.0) {
        if (up_[j] < kInf) { t = (up_[j] - x_[j]) / g; to_upper = true; }
      } else {
        if (lo_[j] > -kInf) { t = (lo_[j] - x_[j]) / g; to_upper = false; }
      }
      if (t == kInf) continue;
      if (t < 0.0) t = 0.0;
      if (t > window) continue;
      bool better;
      if (bland_) {
        better = rr.leaving_pos < 0 || j < head_[rr.leaving_pos];
      } else {
        better = std::abs(w[k]) > best_pivot + 1e-15;
      }
      if (better) {
        best_pivot = std::abs(w[k]);
        rr.leaving_pos = k;
        rr.leaving_to_upper = to_upper;
      }
    }
    if (rr.leaving_pos >= 0) {
      // recompute exact ratio for the chosen blocker
      int k = rr.leaving_pos;
      double g = -dir * w[k];
      int j = head_[k];
      double target = rr.leaving_to_upper ? up_[j] : lo_[j];
      double t = (target - x_[j]) / g;
      rr.theta = std::max(0.0, t);
      if (flip <= rr.theta) {
        rr.leaving_pos = -1;  // the bound flip happens first
        rr.theta = flip;
      }
    }
    return rr;
  }

  void apply_step(int q, int dir, const RatioResult& rr, Eigen::VectorXd& w) {
    double delta = dir * rr.theta;
    // move basics
    if (rr.theta != 0.0)
      for (int k = 0; k < m_; ++k)
        if (w[k] != 0.0) x_[head_[k]] -= delta * w[k];

    if (rr.leaving_pos < 0) {
      // bound flip, basis unchanged
      x_[q] = (dir > 0) ? up_[q] : lo_[q];
      status_[q] = (dir > 0) ? VarStatus::AtUpper : VarStatus::AtLower;
      return;
    }

    int p = rr.leaving_pos;
    int jl = head_[p];
    x_[q] = value_at_status(q) + delta;
    x_[jl] = rr.leaving_to_upper ? up_[jl] : lo_[jl];
    status_[jl] = rr.leaving_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
    status_[q] = VarStatus::Basic;
    head_[p] = q;

    // record the eta for this pivot
    Eta e;
    e.p = p;
    e.wp = w[p];
    for (int k = 0; k < m_; ++k)
      if (k != p && w[k] != 0.0) e.w.emplace_back(k, w[k]);
    eta_nnz_ += e.w.size() + 1;
    etas_.push_back(std::move(e));

    if (++pivots_since_refactor_ >= opts_.refactor_interval ||
        eta_nnz_ > 60u * (unsigned)m_) {
      factorize();
      compute_basic_values();
    }
  }

  double value_at_status(int j) const {
    switch (status_[j]) {
      case VarStatus::AtLower: return lo_[j];
      case VarStatus::AtUpper: return up_[j];
      default: return 0.0;
    }
  }

  void finalize_duals(const Eigen::VectorXd& y) {
    last_duals_.assign(y.data(), y.data() + m_);
    for (int j = 0; j < n_ + m_; ++j) last_d_[j] = reduced_cost(y, j, false);
  }

  const MilpProblem& prob_;
  SimplexOptions opts_;
  int n_, m_;

  // computational form
  std::vector<double> cost_, rhs_, lo_, up_, x_;
  std::vector<int> col_start_, row_idx_;
  std::vector<double> val_;

  // basis state
  std::vector<VarStatus> status_;
  std::vector<int> head_;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  std::size_t eta_nnz_ = 0;
  int pivots_since_refactor_ = 0;

  long iterations_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
  double phase1_dj_ = 0.0;
  std::vector<double> last_d_;
  std::vector<double> last_duals_;
};

// Solves the LP relaxation (integrality dropped, bounds kept).
inline LpOutcome solve_lp_relaxation(const MilpProblem& p,
                                     const SimplexOptions& opts = {}) {
  SimplexSolver s(p, opts);
  return s.solve();
}

inline SolveResult to_solve_result(const LpOutcome& lp) {
  SolveResult r;
  r.status = lp.status;
  r.values = lp.x;
  r.objective = lp.objective;
  r.gap = 0.0;
  r.node_count = 0;
  r.iterations = lp.iterations;
  return r;
}

}  // namespace frcuc::milp
