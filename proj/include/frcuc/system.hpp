#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frcuc/generator.hpp"

namespace frcuc {

struct NetLoadForecast {
  std::vector<double> values;  // MW, index 0 = first period of the horizon
  bool first_is_realized = false;
};

// demand minus wind, clamped at zero
inline NetLoadForecast net_load(const std::vector<double>& demand,
                                const std::vector<double>& wind) {
  if (demand.size() != wind.size())
    throw InvariantError("net_load: demand has " + std::to_string(demand.size()) +
                         " periods, wind has " + std::to_string(wind.size()));
  NetLoadForecast nl;
  nl.values.reserve(demand.size());
  for (std::size_t t = 0; t < demand.size(); ++t)
    nl.values.push_back(std::max(0.0, demand[t] - wind[t]));
  return nl;
}

// State handed to an optimization window: dispatch just before the window
// and every commitment already decided (past history plus pinned in-window
// periods). Periods are global 1-based labels; entries at t <= 0 are
// pre-study history. A unit's state before its earliest recorded period is
// assumed to have been held long enough to satisfy min-up/min-down.
struct BoundaryCondition {
  std::map<std::string, double> initial_power;
  std::map<std::string, std::map<int, int>> fixed_commitments;

  std::optional<int> commitment_at(const std::string& gen, int period) const {
    auto it = fixed_commitments.find(gen);
    if (it == fixed_commitments.end() || it->second.empty()) return std::nullopt;
    const auto& m = it->second;
    auto jt = m.find(period);
    if (jt != m.end()) return jt->second;
    if (period < m.begin()->first) return m.begin()->second;  // steady pre-history
    return std::nullopt;
  }
};

enum class Formulation { Conventional, Proposed };

inline const char* to_string(Formulation f) {
  return f == Formulation::Conventional ? "conventional" : "proposed";
}

struct StudyConfig {
  int horizon = 0;          // periods (T)
  int period_minutes = 60;  // 15 for real-time emulation, 60 for day-ahead
  double voll = 9000.0;     // $/MWh
  double alpha_multiplier = 3.0;  // k, scales the forecast-error sigma
  double mip_gap = 1e-3;
  Formulation formulation = Formulation::Conventional;
  double sigma_demand_frac = 0.01;  // sigma_d as a fraction of forecast demand
  double sigma_wind_frac = 0.04;    // sigma_w as a fraction of installed wind
};

// Optional per-study inputs beyond the core forecast:
//  - day-ahead studies carry demand/wind series and installed wind capacity;
//  - rolling studies carry a realized series plus one forecast row per step;
//  - alpha_mw, when set, is a constant requirement adder (otherwise alpha
//    comes from the sigma model).
struct SeriesData {
  std::vector<double> demand;
  std::vector<double> wind;
  double installed_wind_mw = 0.0;
  std::optional<double> alpha_mw;
  std::vector<double> realized_net_load;
  std::vector<std::vector<double>> forecast_net_load;
};

struct Study {
  std::string name;
  std::vector<Generator> generators;
  NetLoadForecast forecast;
  BoundaryCondition boundary;
  StudyConfig config;
  SeriesData series;

  const Generator& generator(const std::string& id) const {
    for (const auto& g : generators)
      if (g.id == id) return g;
    throw InvariantError("unknown generator '" + id + "'");
  }
  bool has_generator(const std::string& id) const {
    return std::any_of(generators.begin(), generators.end(),
                       [&](const auto& g) { return g.id == id; });
  }
};

inline void validate_study(const Study& s) {
  if (s.generators.empty()) throw InvariantError("study has no generators");
  for (const auto& g : s.generators) validate_generator(g);
  for (std::size_t i = 0; i < s.generators.size(); ++i)
    for (std::size_t j = i + 1; j < s.generators.size(); ++j)
      if (s.generators[i].id == s.generators[j].id)
        throw InvariantError("duplicate generator id '" + s.generators[i].id + "'");

  if (s.forecast.values.size() < 2)
    throw InvariantError("net-load forecast needs at least 2 periods");
  for (std::size_t t = 0; t < s.forecast.values.size(); ++t)
    if (s.forecast.values[t] < 0.0)
      throw InvariantError("net load at period " + std::to_string(t + 1) + " is negative");

  const auto& c = s.config;
  if (c.horizon < 2) throw InvariantError("config.horizon must be >= 2");
  if (!(c.voll > 0.0)) throw InvariantError("config.voll must be positive");
  if (!(c.mip_gap > 0.0 && c.mip_gap < 1.0))
    throw InvariantError("config.mip_gap must lie in (0, 1)");
  if (c.alpha_multiplier < 0.0)
    throw InvariantError("config.alpha_multiplier must be >= 0");
  if (c.sigma_demand_frac < 0.0 || c.sigma_wind_frac < 0.0)
    throw InvariantError("sigma fractions must be >= 0");

  for (const auto& [id, p] : s.boundary.initial_power) {
    if (!s.has_generator(id))
      throw InvariantError("boundary.initial_power references unknown generator '" + id + "'");
    const auto& g = s.generator(id);
    if (p < -1e-9 || p > g.p_max + 1e-9)
      throw InvariantError("boundary.initial_power for '" + id + "' outside [0, p_max]");
  }
  for (const auto& [id, fc] : s.boundary.fixed_commitments) {
    if (!s.has_generator(id))
      throw InvariantError("boundary.fixed_commitments references unknown generator '" + id + "'");
    const auto& g = s.generator(id);
    for (const auto& [t, v] : fc)
      if (v != 0 && v != 1)
        throw InvariantError("boundary commitment for '" + id + "' at period " +
                             std::to_string(t) + " must be 0 or 1");
    // min-up/min-down over the recorded (contiguous) history: completed runs
    // must be long enough
    int prev_t = 0, prev_v = -1, run = 0;
    bool first = true;
    for (const auto& [t, v] : fc) {
      if (first) {
        first = false;
      } else if (t == prev_t + 1) {
        if (v == prev_v) {
          ++run;
        } else {
          int need = prev_v == 1 ? g.min_up : g.min_down;
          bool anchored = fc.begin()->first < prev_t - run + 1;
          if (anchored && run < need)
            throw InvariantError("boundary commitments for '" + id + "' violate min_" +
                                 (prev_v == 1 ? std::string("up") : std::string("down")) +
                                 " before period " + std::to_string(t));
          run = 1;
        }
      } else {
        run = 0;  // gap: restart tracking, don't guess
      }
      prev_t = t;
      prev_v = v;
      if (run == 0) run = 1;
    }
    if (g.must_run())
      for (const auto& [t, v] : fc)
        if (v != 1)
          throw InvariantError("must-run generator '" + id + "' fixed offline at period " +
                               std::to_string(t));
  }
}

}  // namespace frcuc
