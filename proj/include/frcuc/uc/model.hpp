#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frcuc/frc.hpp"
#include "frcuc/milp/problem.hpp"
#include "frcuc/system.hpp"

namespace frcuc::uc {

// One optimization window: net load for W consecutive periods (global labels
// start_period .. start_period+W-1) and ramping requirements for all periods
// but the last (no requirement leaves the window).
struct WindowSpec {
  int start_period = 1;
  std::vector<double> net_load;
  FrcRequirements requirements;
};

struct BuildOptions {
  Formulation formulation = Formulation::Conventional;
  bool allow_shedding = false;  // adds shed/surplus slacks priced at voll
  double voll = 9000.0;
};

// Assembles the window MILP. Commitment variables x/y/z exist for every
// generator and period; boundary-fixed periods are pinned through equal
// bounds, so the variable set does not depend on the boundary shape.
//
// The builder exposes each constraint family as its own method so tests can
// exercise them separately; build_full() wires the standard order:
//   base, trajectory balance (when slow units exist), conventional FRC,
//   then for the proposed formulation the negative-FRC blocks and the
//   requirement replacement, and finally min-up/down.
class UcModel {
 public:
  UcModel(const std::vector<Generator>& gens, WindowSpec win, BoundaryCondition bc,
          BuildOptions opt)
      : gens_(gens), win_(std::move(win)), bc_(std::move(bc)), opt_(opt) {
    W_ = (int)win_.net_load.size();
    if (W_ < 2) throw InvariantError("window needs at least 2 periods");
    if ((int)win_.requirements.upward.size() != W_ - 1 ||
        (int)win_.requirements.downward.size() != W_ - 1)
      throw InvariantError("window requirements must cover exactly W-1 periods");
    G_ = (int)gens_.size();
    for (const auto& g : gens_) {
      if (!bc_.initial_power.count(g.id))
        throw InvariantError("boundary condition missing initial power for '" + g.id + "'");
      if (!x_hist(g.id, win_.start_period - 1))
        throw InvariantError("boundary condition missing commitment for '" + g.id +
                             "' at period " + std::to_string(win_.start_period - 1));
    }
  }

  static UcModel build_full(const std::vector<Generator>& gens, const WindowSpec& win,
                            const BoundaryCondition& bc, const BuildOptions& opt) {
    UcModel m(gens, win, bc, opt);
    m.build_base_uc();
    if (m.has_slow_units()) m.add_trajectory_balance();
    m.add_frc_constraints_conventional();
    if (opt.formulation == Formulation::Proposed) {
      m.add_negative_frc_fast();
      if (m.has_slow_units()) m.add_negative_frc_slow();
      m.add_requirements_proposed();
    }
    m.add_min_up_down();
    return m;
  }

  // --- constraint families ----------------------------------------------

  // Objective, power balance, capacity envelope, ramp limits, commitment
  // logic, and the boundary fixings. FRC variables are added separately and
  // deliberately stay out of the non-negativity set (they are sign-free).
  void build_base_uc() {
    vp_.assign(G_, std::vector<int>(W_, -1));
    vpbar_ = vx_ = vy_ = vz_ = vp_;
    for (int g = 0; g < G_; ++g)
      for (int t = 0; t < W_; ++t)
        vp_[g][t] = prob_.add_variable(vn("p", g, t), 0.0, gens_[g].p_max);
    for (int g = 0; g < G_; ++g)
      for (int t = 0; t < W_; ++t)
        vpbar_[g][t] = prob_.add_variable(vn("pbar", g, t), 0.0, gens_[g].p_max);
    for (int g = 0; g < G_; ++g)
      for (int t = 0; t < W_; ++t)
        vx_[g][t] = prob_.add_variable(vn("x", g, t), 0.0, 1.0, milp::VarKind::Binary);
    for (int g = 0; g < G_; ++g)
      for (int t = 0; t < W_; ++t)
        vy_[g][t] = prob_.add_variable(vn("y", g, t), 0.0, 1.0, milp::VarKind::Binary);
    for (int g = 0; g < G_; ++g)
      for (int t = 0; t < W_; ++t)
        vz_[g][t] = prob_.add_variable(vn("z", g, t), 0.0, 1.0, milp::VarKind::Binary);
    if (opt_.allow_shedding) {
      vshed_.assign(W_, -1);
      vsurplus_.assign(W_, -1);
      for (int t = 0; t < W_; ++t)
        vshed_[t] = prob_.add_variable("shed_t" + std::to_string(gt(t)), 0.0,
                                       std::max(0.0, win_.net_load[t]));
      for (int t = 0; t < W_; ++t)
        vsurplus_[t] =
            prob_.add_variable("surplus_t" + std::to_string(gt(t)), 0.0, kInf);
    }

    // objective: no-load + energy + startup (+ VOLL on slacks)
    for (int g = 0; g < G_; ++g)
      for (int t = 0; t < W_; ++t) {
        prob_.set_objective_term(vx_[g][t], gens_[g].no_load_cost);
        prob_.set_objective_term(vp_[g][t], gens_[g].linear_cost);
        prob_.set_objective_term(vy_[g][t], gens_[g].startup_cost);
      }
    if (opt_.allow_shedding)
      for (int t = 0; t < W_; ++t) {
        prob_.set_objective_term(vshed_[t], opt_.voll);
        prob_.set_objective_term(vsurplus_[t], opt_.voll);
      }

    // boundary fixings: explicit in-window commitments, must-run pins, and
    // the y/z values implied by any two consecutive known x values
    for (int g = 0; g < G_; ++g) {
      for (int t = 0; t < W_; ++t) {
        std::optional<int> fixed = exact_commitment(g, gt(t));
        if (gens_[g].must_run()) {
          if (fixed && *fixed == 0)
            throw InvariantError("must-run '" + gens_[g].id + "' fixed offline");
          fixed = 1;
        }
        if (fixed) prob_.fix(vx_[g][t], (double)*fixed);
      }
      for (int t = 0; t < W_; ++t) {
        auto cur = known_x(g, t);
        auto prev = known_x(g, t - 1);
        if (cur && prev) {
          prob_.fix(vy_[g][t], (double)std::max(0, *cur - *prev));
          prob_.fix(vz_[g][t], (double)std::max(0, *prev - *cur));
        }
      }
    }

    // power balance (plain form; trajectory injections may rewrite it)
    bal_row_.assign(W_, -1);
    for (int t = 0; t < W_; ++t) {
      std::vector<milp::LinearTerm> terms;
      for (int g = 0; g < G_; ++g) terms.push_back({vp_[g][t], 1.0});
      if (opt_.allow_shedding) {
        terms.push_back({vshed_[t], 1.0});
        terms.push_back({vsurplus_[t], -1.0});
      }
      bal_row_[t] = prob_.add_constraint("bal_t" + std::to_string(gt(t)),
                                         std::move(terms), milp::Sense::Equal,
                                         win_.net_load[t]);
    }

    for (int g = 0; g < G_; ++g) {
      const auto& gen = gens_[g];
      for (int t = 0; t < W_; ++t) {
        // capacity envelope: p >= Pmin x, p <= pbar, pbar <= Pmax x
        prob_.add_constraint(cn("cap_lo", g, t),
                             {{vp_[g][t], 1.0}, {vx_[g][t], -gen.p_min}},
                             milp::Sense::GreaterEqual, 0.0);
        prob_.add_constraint(cn("cap_mid", g, t),
                             {{vp_[g][t], 1.0}, {vpbar_[g][t], -1.0}},
                             milp::Sense::LessEqual, 0.0);
        prob_.add_constraint(cn("cap_hi", g, t),
                             {{vpbar_[g][t], 1.0}, {vx_[g][t], -gen.p_max}},
                             milp::Sense::LessEqual, 0.0);

        // upward ramp on available power:
        // pbar_t <= p_{t-1} + RR x_{t-1} + RRSU (x_t - x_{t-1}) + Pmax (1 - x_t)
        {
          std::vector<milp::LinearTerm> terms{{vpbar_[g][t], 1.0}};
          double rhs = gen.p_max;
          terms.push_back({vx_[g][t], gen.p_max - gen.startup_ramp});
          if (t > 0) {
            terms.push_back({vp_[g][t - 1], -1.0});
            terms.push_back({vx_[g][t - 1], gen.startup_ramp - gen.ramp_rate});
          } else {
            double p0 = bc_.initial_power.at(gen.id);
            int x0 = *x_hist(gen.id, win_.start_period - 1);
            rhs += p0 + (gen.ramp_rate - gen.startup_ramp) * x0;
          }
          prob_.add_constraint(cn("ramp_up", g, t), std::move(terms),
                               milp::Sense::LessEqual, rhs);
        }

        // shutdown visibility: pbar_t <= RRSD (x_t - x_{t+1}) + Pmax x_{t+1}
        if (t + 1 < W_) {
          prob_.add_constraint(cn("ramp_sd", g, t),
                               {{vpbar_[g][t], 1.0},
                                {vx_[g][t], -gen.shutdown_ramp},
                                {vx_[g][t + 1], gen.shutdown_ramp - gen.p_max}},
                               milp::Sense::LessEqual, 0.0);
        }

        // downward ramp:
        // p_{t-1} - p_t <= RR x_t + RRSD (x_{t-1} - x_t) + Pmax (1 - x_{t-1})
        {
          std::vector<milp::LinearTerm> terms{{vp_[g][t], -1.0}};
          terms.push_back({vx_[g][t], gen.shutdown_ramp - gen.ramp_rate});
          double rhs = gen.p_max;
          if (t > 0) {
            terms.push_back({vp_[g][t - 1], 1.0});
            terms.push_back({vx_[g][t - 1], gen.p_max - gen.shutdown_ramp});
          } else {
            double p0 = bc_.initial_power.at(gen.id);
            int x0 = *x_hist(gen.id, win_.start_period - 1);
            rhs += -p0 + (gen.shutdown_ramp - gen.p_max) * x0;
          }
          prob_.add_constraint(cn("ramp_dn", g, t), std::move(terms),
                               milp::Sense::LessEqual, rhs);
        }

        // commitment logic: x_t - x_{t-1} = y_t - z_t
        {
          std::vector<milp::LinearTerm> terms{
              {vx_[g][t], 1.0}, {vy_[g][t], -1.0}, {vz_[g][t], 1.0}};
          double rhs = 0.0;
          if (t > 0) terms.push_back({vx_[g][t - 1], -1.0});
          else rhs = (double)*x_hist(gen.id, win_.start_period - 1);
          prob_.add_constraint(cn("logic", g, t), std::move(terms),
                               milp::Sense::Equal, rhs);
        }
        prob_.add_constraint(cn("switch", g, t),
                             {{vy_[g][t], 1.0}, {vz_[g][t], 1.0}},
                             milp::Sense::LessEqual, 1.0);
      }
    }
    base_built_ = true;
  }

  // Rewrites the power balance to include the fixed startup/shutdown power
  // profiles of slow-start units. Profile terms whose switch variable lies
  // before the window come from boundary history (constants); terms beyond
  // the window are undecidable and drop out.
  void add_trajectory_balance() {
    require_base();
    for (int t = 0; t < W_; ++t) {
      std::vector<milp::LinearTerm> terms;
      double rhs = win_.net_load[t];
      for (int g = 0; g < G_; ++g) terms.push_back({vp_[g][t], 1.0});
      if (opt_.allow_shedding) {
        terms.push_back({vshed_[t], 1.0});
        terms.push_back({vsurplus_[t], -1.0});
      }
      for (int g = 0; g < G_; ++g) {
        const auto& gen = gens_[g];
        if (!gen.slow()) continue;
        int su = gen.startup_duration();
        for (int k = 1; k <= su; ++k) {
          int s = t - k + su + 1;  // local index of the startup switch
          double coef = gen.startup_trajectory[k - 1];
          if (s >= 0 && s < W_) terms.push_back({vy_[g][s], coef});
          else if (s < 0) rhs -= coef * y_hist(g, gt(s));
          // s >= W_: a startup decided beyond the window; nothing to add
        }
        int sd = gen.shutdown_duration();
        for (int k = 1; k <= sd; ++k) {
          int s = t - k + 1;
          double coef = gen.shutdown_trajectory[k - 1];
          if (s >= 0 && s < W_) terms.push_back({vz_[g][s], coef});
          else if (s < 0) rhs -= coef * z_hist(g, gt(s));
        }
      }
      prob_.replace_constraint(bal_row_[t], std::move(terms), milp::Sense::Equal, rhs);
    }
  }

  // Per-unit FRC capability envelopes plus the system requirement rows.
  void add_frc_constraints_conventional() {
    require_base();
    vur_.assign(G_, std::vector<int>(W_ - 1, -1));
    vdr_ = vur_;
    for (int g = 0; g < G_; ++g)
      for (int t = 0; t + 1 < W_; ++t)
        vur_[g][t] = prob_.add_variable(vn("ur", g, t), -gens_[g].p_max, gens_[g].p_max);
    for (int g = 0; g < G_; ++g)
      for (int t = 0; t + 1 < W_; ++t)
        vdr_[g][t] = prob_.add_variable(vn("dr", g, t), -gens_[g].p_max, gens_[g].p_max);

    for (int g = 0; g < G_; ++g) {
      const auto& gen = gens_[g];
      double pmax = gen.p_max, pmin = gen.p_min;
      double rr = gen.ramp_rate, rsu = gen.startup_ramp, rsd = gen.shutdown_ramp;
      for (int t = 0; t + 1 < W_; ++t) {
        int ur = vur_[g][t], dr = vdr_[g][t];
        int xt = vx_[g][t], xn = vx_[g][t + 1];
        // headroom window: Pmin (x_t + x_{t+1} - 1) <= ur + p_t <= pbar_{t+1} + Pmax (1 - x_{t+1})
        prob_.add_constraint(cn("frc_up_lo", g, t),
                             {{ur, 1.0}, {vp_[g][t], 1.0}, {xt, -pmin}, {xn, -pmin}},
                             milp::Sense::GreaterEqual, -pmin);
        prob_.add_constraint(cn("frc_up_hi", g, t),
                             {{ur, 1.0}, {vp_[g][t], 1.0}, {vpbar_[g][t + 1], -1.0},
                              {xn, pmax}},
                             milp::Sense::LessEqual, pmax);
        // mirrored window on p_t - dr
        prob_.add_constraint(cn("frc_dn_lo", g, t),
                             {{vp_[g][t], 1.0}, {dr, -1.0}, {xt, -pmin}, {xn, -pmin}},
                             milp::Sense::GreaterEqual, -pmin);
        prob_.add_constraint(cn("frc_dn_hi", g, t),
                             {{vp_[g][t], 1.0}, {dr, -1.0}, {vpbar_[g][t + 1], -1.0},
                              {xn, pmax}},
                             milp::Sense::LessEqual, pmax);
        // ramp-rate caps, symmetric pair:
        // ur <= RR x_t + RRSU (x_{t+1} - x_t) + Pmax (1 - x_{t+1})
        prob_.add_constraint(cn("frc_up_ramp_hi", g, t),
                             {{ur, 1.0}, {xt, rsu - rr}, {xn, pmax - rsu}},
                             milp::Sense::LessEqual, pmax);
        // ur >= -[RR x_{t+1} + RRSD (x_t - x_{t+1}) + Pmax (1 - x_t)]
        prob_.add_constraint(cn("frc_up_ramp_lo", g, t),
                             {{ur, 1.0}, {xt, rsd - pmax}, {xn, rr - rsd}},
                             milp::Sense::GreaterEqual, -pmax);
        // dr <= RR x_{t+1} + RRSD (x_t - x_{t+1}) + Pmax (1 - x_t)
        prob_.add_constraint(cn("frc_dn_ramp_hi", g, t),
                             {{dr, 1.0}, {xt, pmax - rsd}, {xn, rsd - rr}},
                             milp::Sense::LessEqual, pmax);
        // dr >= -[RR x_t + RRSU (x_{t+1} - x_t) + Pmax (1 - x_{t+1})]
        prob_.add_constraint(cn("frc_dn_ramp_lo", g, t),
                             {{dr, 1.0}, {xt, rr - rsu}, {xn, rsu - pmax}},
                             milp::Sense::GreaterEqual, -pmax);
        // capacity caps: -Pmax x_t + Pmin x_{t+1} <= ur <= Pmax x_{t+1}
        prob_.add_constraint(cn("frc_up_cap_lo", g, t),
                             {{ur, 1.0}, {xt, pmax}, {xn, -pmin}},
                             milp::Sense::GreaterEqual, 0.0);
        prob_.add_constraint(cn("frc_up_cap_hi", g, t), {{ur, 1.0}, {xn, -pmax}},
                             milp::Sense::LessEqual, 0.0);
        // -Pmax x_{t+1} <= dr <= Pmax x_t - Pmin x_{t+1}
        prob_.add_constraint(cn("frc_dn_cap_lo", g, t), {{dr, 1.0}, {xn, pmax}},
                             milp::Sense::GreaterEqual, 0.0);
        prob_.add_constraint(cn("frc_dn_cap_hi", g, t),
                             {{dr, 1.0}, {xt, -pmax}, {xn, pmin}},
                             milp::Sense::LessEqual, 0.0);
      }
    }

    ufrc_row_.assign(W_ - 1, -1);
    dfrc_row_.assign(W_ - 1, -1);
    for (int t = 0; t + 1 < W_; ++t) {
      std::vector<milp::LinearTerm> up, dn;
      for (int g = 0; g < G_; ++g) {
        up.push_back({vur_[g][t], 1.0});
        dn.push_back({vdr_[g][t], 1.0});
      }
      ufrc_row_[t] = prob_.add_constraint("ufrc_t" + std::to_string(gt(t)),
                                          std::move(up), milp::Sense::GreaterEqual,
                                          win_.requirements.upward[t]);
      dfrc_row_[t] = prob_.add_constraint("dfrc_t" + std::to_string(gt(t)),
                                          std::move(dn), milp::Sense::GreaterEqual,
                                          win_.requirements.downward[t]);
    }
    frc_built_ = true;
  }

  // Fast-start negative contributions: a unit producing in t that is told to
  // switch off in t+1 withdraws its full output from upward capability; one
  // told to switch on withdraws its t+1 output from downward capability.
  void add_negative_frc_fast() {
    require_frc();
    ensure_negative_vars();
    for (int g = 0; g < G_; ++g) {
      const auto& gen = gens_[g];
      if (gen.slow() || gen.must_run()) continue;
      double pmax = gen.p_max, pmin = gen.p_min;
      for (int t = 0; t + 1 < W_; ++t) {
        int zn = vz_[g][t + 1], yn = vy_[g][t + 1];
        prob_.add_constraint(cn("nfrc_up_split", g, t),
                             {{vp_[g][t], 1.0}, {vnur_[g][t], -1.0}, {vdsd_[g][t], -1.0}},
                             milp::Sense::Equal, 0.0);
        prob_.add_constraint(cn("nfrc_up_ind_lo", g, t),
                             {{vnur_[g][t], 1.0}, {zn, -pmin}},
                             milp::Sense::GreaterEqual, 0.0);
        prob_.add_constraint(cn("nfrc_up_ind_hi", g, t),
                             {{vnur_[g][t], 1.0}, {zn, -pmax}},
                             milp::Sense::LessEqual, 0.0);
        prob_.add_constraint(cn("nfrc_up_res", g, t),
                             {{vdsd_[g][t], 1.0}, {zn, pmax}},
                             milp::Sense::LessEqual, pmax);
        // mirrored on the startup side, keyed to the t+1 output
        prob_.add_constraint(cn("nfrc_dn_split", g, t),
                             {{vp_[g][t + 1], 1.0}, {vndr_[g][t], -1.0}, {vdsu_[g][t], -1.0}},
                             milp::Sense::Equal, 0.0);
        prob_.add_constraint(cn("nfrc_dn_ind_lo", g, t),
                             {{vndr_[g][t], 1.0}, {yn, -pmin}},
                             milp::Sense::GreaterEqual, 0.0);
        prob_.add_constraint(cn("nfrc_dn_ind_hi", g, t),
                             {{vndr_[g][t], 1.0}, {yn, -pmax}},
                             milp::Sense::LessEqual, 0.0);
        prob_.add_constraint(cn("nfrc_dn_res", g, t),
                             {{vdsu_[g][t], 1.0}, {yn, pmax}},
                             milp::Sense::LessEqual, pmax);
      }
    }
  }

  // Slow-start negative contributions. On shutdown the unit first falls to
  // the head of its profile (a dispatch-dependent drop), then follows the
  // fixed profile decrements; startups mirror this around the profile tail.
  void add_negative_frc_slow() {
    require_frc();
    ensure_negative_vars();
    for (int g = 0; g < G_; ++g) {
      const auto& gen = gens_[g];
      if (!gen.slow()) continue;
      double pmax = gen.p_max, pmin = gen.p_min;
      double sd1 = gen.first_shutdown_point();
      double sul = gen.last_startup_point();
      for (int t = 0; t + 1 < W_; ++t) {
        int zn = vz_[g][t + 1], yn = vy_[g][t + 1];
        // p_t - SD1 x_t = nur + dsd + SD1
        prob_.add_constraint(cn("nfrc_up_split", g, t),
                             {{vp_[g][t], 1.0}, {vx_[g][t], -sd1},
                              {vnur_[g][t], -1.0}, {vdsd_[g][t], -1.0}},
                             milp::Sense::Equal, sd1);
        prob_.add_constraint(cn("nfrc_up_ind_lo", g, t),
                             {{vnur_[g][t], 1.0}, {zn, -(pmin - sd1)}},
                             milp::Sense::GreaterEqual, 0.0);
        prob_.add_constraint(cn("nfrc_up_ind_hi", g, t),
                             {{vnur_[g][t], 1.0}, {zn, -(pmax - sd1)}},
                             milp::Sense::LessEqual, 0.0);
        // 0 <= dsd + SD1 <= Pmax (1 - z_{t+1}); the lower half lives in the
        // variable bound dsd >= -SD1
        prob_.add_constraint(cn("nfrc_up_res", g, t),
                             {{vdsd_[g][t], 1.0}, {zn, pmax}},
                             milp::Sense::LessEqual, pmax - sd1);
        // profile decrements charged while the shutdown is in progress
        {
          std::vector<milp::LinearTerm> terms{{vnursd_[g][t], 1.0}};
          double rhs = 0.0;
          int sdur = gen.shutdown_duration();
          for (int k = 1; k <= sdur; ++k) {
            double step = gen.shutdown_trajectory[k - 1] -
                          (k < sdur ? gen.shutdown_trajectory[k] : 0.0);
            int s = t - k + 1;
            if (s >= 0) terms.push_back({vz_[g][s], -step});
            else rhs += step * z_hist(g, gt(s));
          }
          prob_.add_constraint(cn("nfrc_up_prof", g, t), std::move(terms),
                               milp::Sense::Equal, rhs);
        }
        // p_{t+1} - SUlast x_{t+1} = ndr + dsu + SUlast
        prob_.add_constraint(cn("nfrc_dn_split", g, t),
                             {{vp_[g][t + 1], 1.0}, {vx_[g][t + 1], -sul},
                              {vndr_[g][t], -1.0}, {vdsu_[g][t], -1.0}},
                             milp::Sense::Equal, sul);
        prob_.add_constraint(cn("nfrc_dn_ind_lo", g, t),
                             {{vndr_[g][t], 1.0}, {yn, -(pmin - sul)}},
                             milp::Sense::GreaterEqual, 0.0);
        prob_.add_constraint(cn("nfrc_dn_ind_hi", g, t),
                             {{vndr_[g][t], 1.0}, {yn, -(pmax - sul)}},
                             milp::Sense::LessEqual, 0.0);
        prob_.add_constraint(cn("nfrc_dn_res", g, t),
                             {{vdsu_[g][t], 1.0}, {yn, pmax}},
                             milp::Sense::LessEqual, pmax - sul);
        // profile increments charged while a startup is in progress; the
        // switch variables sit ahead of t and may fall beyond the window
        {
          std::vector<milp::LinearTerm> terms{{vndrsu_[g][t], 1.0}};
          int sdur = gen.startup_duration();
          for (int k = 1; k <= sdur; ++k) {
            double step = gen.startup_trajectory[sdur - k] -
                          (k < sdur ? gen.startup_trajectory[sdur - k - 1] : 0.0);
            int s = t + 1 + k;
            if (s < W_) terms.push_back({vy_[g][s], -step});
          }
          prob_.add_constraint(cn("nfrc_dn_prof", g, t), std::move(terms),
                               milp::Sense::Equal, 0.0);
        }
      }
    }
  }

  // Requirement rows restated net of the negative contributions; the
  // requirement values themselves are untouched.
  void add_requirements_proposed() {
    require_frc();
    if (vnur_.empty())
      throw InvariantError("negative-FRC constraints must be added first");
    for (int t = 0; t + 1 < W_; ++t) {
      std::vector<milp::LinearTerm> up, dn;
      for (int g = 0; g < G_; ++g) {
        up.push_back({vur_[g][t], 1.0});
        dn.push_back({vdr_[g][t], 1.0});
        if (vnur_[g][t] >= 0) {
          up.push_back({vnur_[g][t], -1.0});
          dn.push_back({vndr_[g][t], -1.0});
        }
        if (gens_[g].slow()) {
          up.push_back({vnursd_[g][t], -1.0});
          dn.push_back({vndrsu_[g][t], -1.0});
        }
      }
      prob_.replace_constraint(ufrc_row_[t], std::move(up), milp::Sense::GreaterEqual,
                               win_.requirements.upward[t]);
      prob_.replace_constraint(dfrc_row_[t], std::move(dn), milp::Sense::GreaterEqual,
                               win_.requirements.downward[t]);
    }
  }

  // Turn-on/turn-off inequalities with boundary history:
  //   sum_{s in (t-UT, t]} y_s <= x_t     sum_{s in (t-DT, t]} z_s <= 1 - x_t
  void add_min_up_down() {
    require_base();
    for (int g = 0; g < G_; ++g) {
      const auto& gen = gens_[g];
      if (gen.must_run()) continue;
      if (gen.min_up > 1) {
        for (int t = 0; t < W_; ++t) {
          std::vector<milp::LinearTerm> terms;
          double hist = 0.0;
          for (int s = t - gen.min_up + 1; s <= t; ++s) {
            if (s >= 0) terms.push_back({vy_[g][s], 1.0});
            else hist += y_hist(g, gt(s));
          }
          terms.push_back({vx_[g][t], -1.0});
          prob_.add_constraint(cn("min_up", g, t), std::move(terms),
                               milp::Sense::LessEqual, -hist);
        }
      }
      if (gen.min_down > 1) {
        for (int t = 0; t < W_; ++t) {
          std::vector<milp::LinearTerm> terms;
          double hist = 0.0;
          for (int s = t - gen.min_down + 1; s <= t; ++s) {
            if (s >= 0) terms.push_back({vz_[g][s], 1.0});
            else hist += z_hist(g, gt(s));
          }
          terms.push_back({vx_[g][t], 1.0});
          prob_.add_constraint(cn("min_down", g, t), std::move(terms),
                               milp::Sense::LessEqual, 1.0 - hist);
        }
      }
    }
  }

  // --- accessors ----------------------------------------------------------

  milp::MilpProblem& problem() { return prob_; }
  const milp::MilpProblem& problem() const { return prob_; }
  const std::vector<Generator>& generators() const { return gens_; }
  const WindowSpec& window() const { return win_; }
  const BoundaryCondition& boundary() const { return bc_; }
  const BuildOptions& options() const { return opt_; }
  int periods() const { return W_; }
  int num_gens() const { return G_; }
  int gt(int t) const { return win_.start_period + t; }
  bool has_slow_units() const {
    for (const auto& g : gens_)
      if (g.slow()) return true;
    return false;
  }

  int var_p(int g, int t) const { return vp_[g][t]; }
  int var_pbar(int g, int t) const { return vpbar_[g][t]; }
  int var_x(int g, int t) const { return vx_[g][t]; }
  int var_y(int g, int t) const { return vy_[g][t]; }
  int var_z(int g, int t) const { return vz_[g][t]; }
  int var_ur(int g, int t) const { return vur_[g][t]; }
  int var_dr(int g, int t) const { return vdr_[g][t]; }
  int var_shed(int t) const { return vshed_.empty() ? -1 : vshed_[t]; }
  int var_surplus(int t) const { return vsurplus_.empty() ? -1 : vsurplus_[t]; }
  int var_nur(int g, int t) const { return vnur_.empty() ? -1 : vnur_[g][t]; }
  int var_ndr(int g, int t) const { return vndr_.empty() ? -1 : vndr_[g][t]; }
  int var_nursd(int g, int t) const { return vnursd_.empty() ? -1 : vnursd_[g][t]; }
  int var_ndrsu(int g, int t) const { return vndrsu_.empty() ? -1 : vndrsu_[g][t]; }

  int x_history(int g, int period) const { return *x_hist(gens_[g].id, period); }
  int y_history(int g, int period) const { return y_hist(g, period); }
  int z_history(int g, int period) const { return z_hist(g, period); }

 private:
  void require_base() const {
    if (!base_built_) throw InvariantError("base model must be built first");
  }
  void require_frc() const {
    require_base();
    if (!frc_built_) throw InvariantError("FRC capability constraints must be built first");
  }

  void ensure_negative_vars() {
    if (!vnur_.empty()) return;
    vnur_.assign(G_, std::vector<int>(W_ - 1, -1));
    vndr_ = vdsd_ = vdsu_ = vnur_;
    vnursd_.assign(G_, std::vector<int>(W_ - 1, -1));
    vndrsu_ = vnursd_;
    for (int g = 0; g < G_; ++g) {
      const auto& gen = gens_[g];
      if (gen.must_run()) continue;
      double sd1 = gen.slow() ? gen.first_shutdown_point() : 0.0;
      double sul = gen.slow() ? gen.last_startup_point() : 0.0;
      for (int t = 0; t + 1 < W_; ++t) {
        vnur_[g][t] = prob_.add_variable(vn("nur", g, t), 0.0, gen.p_max);
        vndr_[g][t] = prob_.add_variable(vn("ndr", g, t), 0.0, gen.p_max);
        vdsd_[g][t] = prob_.add_variable(vn("dsd", g, t), -sd1, gen.p_max);
        vdsu_[g][t] = prob_.add_variable(vn("dsu", g, t), -sul, gen.p_max);
        if (gen.slow()) {
          vnursd_[g][t] = prob_.add_variable(vn("nursd", g, t), 0.0, gen.p_max);
          vndrsu_[g][t] = prob_.add_variable(vn("ndrsu", g, t), 0.0, gen.p_max);
        }
      }
    }
  }

  std::string vn(const char* kind, int g, int t) const {
    return std::string(kind) + "_" + gens_[g].id + "_t" + std::to_string(gt(t));
  }
  std::string cn(const char* kind, int g, int t) const {
    return std::string(kind) + "_" + gens_[g].id + "_t" + std::to_string(gt(t));
  }

  std::optional<int> exact_commitment(int g, int period) const {
    auto it = bc_.fixed_commitments.find(gens_[g].id);
    if (it == bc_.fixed_commitments.end()) return std::nullopt;
    auto jt = it->second.find(period);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
  }

  // x at a window period when determined: boundary-fixed or must-run
  std::optional<int> known_x(int g, int t) const {
    if (t < 0) return x_hist(gens_[g].id, gt(t));
    if (gens_[g].must_run()) return 1;
    return exact_commitment(g, gt(t));
  }

  std::optional<int> x_hist(const std::string& id, int period) const {
    if (gens_valid_ && generator_by_id(id).must_run()) return 1;
    return bc_.commitment_at(id, period);
  }
  const Generator& generator_by_id(const std::string& id) const {
    for (const auto& g : gens_)
      if (g.id == id) return g;
    throw InvariantError("unknown generator '" + id + "'");
  }

  int y_hist(int g, int period) const {
    auto cur = x_hist(gens_[g].id, period);
    auto prev = x_hist(gens_[g].id, period - 1);
    if (!cur || !prev) return 0;
    return std::max(0, *cur - *prev);
  }
  int z_hist(int g, int period) const {
    auto cur = x_hist(gens_[g].id, period);
    auto prev = x_hist(gens_[g].id, period - 1);
    if (!cur || !prev) return 0;
    return std::max(0, *prev - *cur);
  }

  std::vector<Generator> gens_;
  WindowSpec win_;
  BoundaryCondition bc_;
  BuildOptions opt_;
  int W_ = 0, G_ = 0;
  bool gens_valid_ = true;
  bool base_built_ = false;
  bool frc_built_ = false;

  milp::MilpProblem prob_;
  std::vector<std::vector<int>> vp_, vpbar_, vx_, vy_, vz_, vur_, vdr_;
  std::vector<std::vector<int>> vnur_, vndr_, vdsd_, vdsu_, vnursd_, vndrsu_;
  std::vector<int> vshed_, vsurplus_;
  std::vector<int> bal_row_, ufrc_row_, dfrc_row_;
};

}  // namespace frcuc::uc
