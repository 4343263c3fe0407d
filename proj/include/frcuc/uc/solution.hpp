#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "frcuc/milp/problem.hpp"
#include "frcuc/uc/model.hpp"

namespace frcuc::uc {

// Typed window solution. FRC awards are reported in canonical form: each
// unit carries the maximum award its capability envelope admits given the
// solved commitments and dispatch. Awards are non-unique whenever the
// requirement rows are slack, so reporting the capability maximum keeps the
// output deterministic and comparable across solver backends.
struct UcSolution {
  int start_period = 1;
  int periods = 0;
  std::vector<std::string> gen_ids;
  // [gen][local period]
  std::vector<std::vector<int>> x, y, z;
  std::vector<std::vector<double>> p, pbar;
  // [gen][local period], defined for the first periods-1 entries
  std::vector<std::vector<double>> ur, dr;
  std::vector<std::vector<double>> nur, ndr, nursd, ndrsu;
  std::vector<double> shed, surplus;    // per period; zero when disabled
  std::vector<double> period_cost;      // $ per period, VOLL penalties included
  double objective = 0.0;
  double gap = 0.0;
  long node_count = 0;
  milp::SolveStatus status = milp::SolveStatus::Infeasible;

  double total_cost() const {
    double s = 0.0;
    for (double c : period_cost) s += c;
    return s;
  }
  int gen_index(const std::string& id) const {
    for (std::size_t i = 0; i < gen_ids.size(); ++i)
      if (gen_ids[i] == id) return (int)i;
    throw InvariantError("solution lacks generator '" + id + "'");
  }
};

namespace detail {

inline int as_bit(double v) { return v > 0.5 ? 1 : 0; }

// clears solver dust (including negative zero) off reported quantities
inline double snap(double v, double tol = 1e-9) { return std::abs(v) < tol ? 0.0 : v; }

}  // namespace detail

inline UcSolution extract_solution(const UcModel& m, const milp::SolveResult& r) {
  UcSolution s;
  s.status = r.status;
  s.gap = r.gap;
  s.node_count = r.node_count;
  if (r.status != milp::SolveStatus::Optimal && r.status != milp::SolveStatus::GapLimit) {
    s.objective = kInf;
    return s;
  }
  const auto& gens = m.generators();
  const int W = m.periods(), G = m.num_gens();
  s.start_period = m.window().start_period;
  s.periods = W;
  s.objective = r.objective;

  s.gen_ids.reserve(G);
  for (const auto& g : gens) s.gen_ids.push_back(g.id);
  auto grid = [&](double init) {
    return std::vector<std::vector<double>>(G, std::vector<double>(W, init));
  };
  s.x.assign(G, std::vector<int>(W, 0));
  s.y = s.z = s.x;
  s.p = grid(0.0);
  s.pbar = grid(0.0);
  s.ur.assign(G, std::vector<double>(std::max(0, W - 1), 0.0));
  s.dr = s.nur = s.ndr = s.nursd = s.ndrsu = s.ur;
  s.shed.assign(W, 0.0);
  s.surplus.assign(W, 0.0);

  for (int g = 0; g < G; ++g)
    for (int t = 0; t < W; ++t) {
      s.x[g][t] = detail::as_bit(r.value(m.var_x(g, t)));
      s.y[g][t] = detail::as_bit(r.value(m.var_y(g, t)));
      s.z[g][t] = detail::as_bit(r.value(m.var_z(g, t)));
      s.p[g][t] = detail::snap(r.value(m.var_p(g, t)));
    }
  for (int t = 0; t < W; ++t) {
    if (m.var_shed(t) >= 0) s.shed[t] = detail::snap(r.value(m.var_shed(t)));
    if (m.var_surplus(t) >= 0) s.surplus[t] = detail::snap(r.value(m.var_surplus(t)));
  }

  // canonical maximum available power: the tightest of the capacity and
  // ramp envelopes around the solved dispatch and commitments
  for (int g = 0; g < G; ++g) {
    const auto& gen = gens[g];
    for (int t = 0; t < W; ++t) {
      if (s.x[g][t] == 0) {
        s.pbar[g][t] = 0.0;
        continue;
      }
      double prev_p = t > 0 ? s.p[g][t - 1] : m.boundary().initial_power.at(gen.id);
      int prev_x = t > 0 ? s.x[g][t - 1]
                         : m.x_history(g, m.window().start_period - 1);
      double cap = gen.p_max;
      cap = std::min(cap, prev_p + gen.ramp_rate * prev_x +
                              gen.startup_ramp * (1 - prev_x));
      if (t + 1 < W)
        cap = std::min(cap, gen.shutdown_ramp * (s.x[g][t] - s.x[g][t + 1]) +
                                gen.p_max * s.x[g][t + 1]);
      s.pbar[g][t] = std::max(cap, s.p[g][t]);
    }
  }

  // canonical awards: per-unit upper envelope, clipped from below by the
  // envelope's own lower bounds (a no-op for any feasible solution)
  const bool proposed = m.options().formulation == Formulation::Proposed;
  for (int g = 0; g < G; ++g) {
    const auto& gen = gens[g];
    double pmax = gen.p_max, pmin = gen.p_min;
    double rr = gen.ramp_rate, rsu = gen.startup_ramp, rsd = gen.shutdown_ramp;
    for (int t = 0; t + 1 < W; ++t) {
      int xt = s.x[g][t], xn = s.x[g][t + 1];
      double pt = s.p[g][t];
      double up_hi = std::min({rr * xt + rsu * (xn - xt) + pmax * (1 - xn),
                               (double)pmax * xn,
                               s.pbar[g][t + 1] + pmax * (1 - xn) - pt});
      double up_lo = std::max({pmin * (xt + xn - 1) - pt,
                               -(rr * xn + rsd * (xt - xn) + pmax * (1 - xt)),
                               (double)(-pmax * xt + pmin * xn)});
      s.ur[g][t] = detail::snap(std::max(up_hi, up_lo));
      double dn_hi = std::min({rr * xn + rsd * (xt - xn) + pmax * (1 - xt),
                               (double)(pmax * xt - pmin * xn),
                               pt - pmin * (xt + xn - 1)});
      double dn_lo = std::max({-(rr * xt + rsu * (xn - xt) + pmax * (1 - xn)),
                               (double)(-pmax * xn),
                               pt - s.pbar[g][t + 1] - pmax * (1 - xn)});
      s.dr[g][t] = detail::snap(std::max(dn_hi, dn_lo));

      if (proposed && !gen.must_run()) {
        if (gen.slow()) {
          double sd1 = gen.first_shutdown_point();
          double sul = gen.last_startup_point();
          s.nur[g][t] = s.z[g][t + 1] ? pt - sd1 : 0.0;
          s.ndr[g][t] = s.y[g][t + 1] ? s.p[g][t + 1] - sul : 0.0;
          int sdur = gen.shutdown_duration();
          double acc = 0.0;
          for (int k = 1; k <= sdur; ++k) {
            double step = gen.shutdown_trajectory[k - 1] -
                          (k < sdur ? gen.shutdown_trajectory[k] : 0.0);
            int sidx = t - k + 1;
            int zv = sidx >= 0 ? s.z[g][sidx]
                               : m.z_history(g, m.window().start_period + sidx);
            acc += step * zv;
          }
          s.nursd[g][t] = acc;
          int udur = gen.startup_duration();
          acc = 0.0;
          for (int k = 1; k <= udur; ++k) {
            double step = gen.startup_trajectory[udur - k] -
                          (k < udur ? gen.startup_trajectory[udur - k - 1] : 0.0);
            int sidx = t + 1 + k;
            if (sidx < W) acc += step * s.y[g][sidx];
          }
          s.ndrsu[g][t] = acc;
        } else {
          s.nur[g][t] = s.z[g][t + 1] ? pt : 0.0;
          s.ndr[g][t] = s.y[g][t + 1] ? s.p[g][t + 1] : 0.0;
        }
      }
    }
  }

  // per-period cost decomposition in the study's cost convention
  s.period_cost.assign(W, 0.0);
  for (int t = 0; t < W; ++t) {
    double c = 0.0;
    for (int g = 0; g < G; ++g)
      c += gens[g].no_load_cost * s.x[g][t] + gens[g].linear_cost * s.p[g][t] +
           gens[g].startup_cost * s.y[g][t];
    c += m.options().voll * (s.shed[t] + s.surplus[t]);
    s.period_cost[t] = c;
  }
  return s;
}

// Historical switch events reconstructed from the boundary's commitment
// record; zero when the record does not determine the transition.
inline int boundary_y_at(const BoundaryCondition& bc, const std::string& id, int period) {
  auto cur = bc.commitment_at(id, period);
  auto prev = bc.commitment_at(id, period - 1);
  if (!cur || !prev) return 0;
  return std::max(0, *cur - *prev);
}
inline int boundary_z_at(const BoundaryCondition& bc, const std::string& id, int period) {
  auto cur = bc.commitment_at(id, period);
  auto prev = bc.commitment_at(id, period - 1);
  if (!cur || !prev) return 0;
  return std::max(0, *prev - *cur);
}

// Total startup/shutdown profile power injected at each window period by
// slow-start units, combining in-window switches with boundary history.
inline std::vector<double> scheduled_injections(const std::vector<Generator>& gens,
                                                const UcSolution& sol,
                                                const BoundaryCondition& bc) {
  const int W = sol.periods;
  std::vector<double> inj(W, 0.0);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const auto& gen = gens[g];
    if (!gen.slow()) continue;
    auto y_at = [&](int local) {
      if (local >= 0 && local < W) return sol.y[g][local];
      if (local < 0) return boundary_y_at(bc, gen.id, sol.start_period + local);
      return 0;
    };
    auto z_at = [&](int local) {
      if (local >= 0 && local < W) return sol.z[g][local];
      if (local < 0) return boundary_z_at(bc, gen.id, sol.start_period + local);
      return 0;
    };
    int su = gen.startup_duration(), sd = gen.shutdown_duration();
    for (int t = 0; t < W; ++t) {
      for (int k = 1; k <= su; ++k)
        inj[t] += gen.startup_trajectory[k - 1] * y_at(t - k + su + 1);
      for (int k = 1; k <= sd; ++k)
        inj[t] += gen.shutdown_trajectory[k - 1] * z_at(t - k + 1);
    }
  }
  return inj;
}

// Rebuilds a full variable-value vector (canonical awards included) for
// feasibility checking against the model.
inline std::vector<double> solution_values(const UcModel& m, const UcSolution& s) {
  std::vector<double> v(m.problem().num_variables(), 0.0);
  const auto& gens = m.generators();
  const int W = m.periods(), G = m.num_gens();
  for (int g = 0; g < G; ++g) {
    const auto& gen = gens[g];
    for (int t = 0; t < W; ++t) {
      v[m.var_p(g, t)] = s.p[g][t];
      v[m.var_pbar(g, t)] = s.pbar[g][t];
      v[m.var_x(g, t)] = s.x[g][t];
      v[m.var_y(g, t)] = s.y[g][t];
      v[m.var_z(g, t)] = s.z[g][t];
    }
    for (int t = 0; t + 1 < W; ++t) {
      if (m.var_ur(g, t) >= 0) v[m.var_ur(g, t)] = s.ur[g][t];
      if (m.var_dr(g, t) >= 0) v[m.var_dr(g, t)] = s.dr[g][t];
      if (m.var_nur(g, t) >= 0) {
        v[m.var_nur(g, t)] = s.nur[g][t];
        v[m.var_ndr(g, t)] = s.ndr[g][t];
        if (gen.slow()) {
          double sd1 = gen.first_shutdown_point(), sul = gen.last_startup_point();
          v[m.problem().variable_index(std::string("dsd_") + gen.id + "_t" +
                                       std::to_string(m.gt(t)))] =
              s.p[g][t] - sd1 * s.x[g][t] - s.nur[g][t] - sd1;
          v[m.problem().variable_index(std::string("dsu_") + gen.id + "_t" +
                                       std::to_string(m.gt(t)))] =
              s.p[g][t + 1] - sul * s.x[g][t + 1] - s.ndr[g][t] - sul;
          v[m.var_nursd(g, t)] = s.nursd[g][t];
          v[m.var_ndrsu(g, t)] = s.ndrsu[g][t];
        } else {
          v[m.problem().variable_index(std::string("dsd_") + gen.id + "_t" +
                                       std::to_string(m.gt(t)))] =
              s.p[g][t] - s.nur[g][t];
          v[m.problem().variable_index(std::string("dsu_") + gen.id + "_t" +
                                       std::to_string(m.gt(t)))] =
              s.p[g][t + 1] - s.ndr[g][t];
        }
      }
    }
  }
  for (int t = 0; t < W; ++t) {
    if (m.var_shed(t) >= 0) v[m.var_shed(t)] = s.shed[t];
    if (m.var_surplus(t) >= 0) v[m.var_surplus(t)] = s.surplus[t];
  }
  return v;
}

}  // namespace frcuc::uc
