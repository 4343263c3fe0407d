#pragma once

#include <cstdint>
#include <random>

#include "frcuc/system.hpp"

namespace frcuc::fixtures {

// Four-unit desk system: a constant baseload unit plus three fast-start
// units with increasing marginal cost, 15-minute periods, a three-step
// realized series with per-step look-ahead forecast rows, and a constant
// 30 MW requirement adder.
inline Study toy_study() {
  Study s;
  s.name = "toy-rolling";
  auto gen = [](std::string id, GenClass k, double nl, double lp, double su,
                double pmax, double pmin, double rr, double rsu, double rsd) {
    Generator g;
    g.id = std::move(id);
    g.klass = k;
    g.no_load_cost = nl;
    g.linear_cost = lp;
    g.startup_cost = su;
    g.p_max = pmax;
    g.p_min = pmin;
    g.ramp_rate = rr;
    g.startup_ramp = rsu;
    g.shutdown_ramp = rsd;
    return g;
  };
  s.generators.push_back(gen("G1", GenClass::MustRun, 0, 0, 0, 300, 300, 0, 0, 0));
  s.generators.push_back(gen("G2", GenClass::FastStart, 300, 20, 300, 150, 50, 40, 60, 60));
  s.generators.push_back(gen("G3", GenClass::FastStart, 300, 40, 600, 200, 50, 40, 60, 60));
  s.generators.push_back(gen("G4", GenClass::FastStart, 300, 60, 900, 150, 50, 40, 100, 100));

  s.boundary.initial_power = {{"G1", 300}, {"G2", 150}, {"G3", 190}, {"G4", 50}};
  for (const auto& g : s.generators) {
    s.boundary.fixed_commitments[g.id][0] = 1;
    s.boundary.fixed_commitments[g.id][1] = 1;
  }

  s.config.horizon = 6;
  s.config.period_minutes = 15;
  s.config.voll = 9000.0;
  s.config.alpha_multiplier = 1.0;
  s.config.mip_gap = 1e-3;
  s.config.formulation = Formulation::Conventional;

  s.series.alpha_mw = 30.0;
  s.series.realized_net_load = {690, 660, 665};
  s.series.forecast_net_load = {
      {690, 660, 640, 620}, {660, 640, 620, 590}, {665, 620, 590, 570}};
  s.forecast.values = s.series.forecast_net_load.front();
  s.forecast.first_is_realized = true;

  validate_study(s);
  return s;
}

// The same four-unit fleet arranged as a small day-ahead study: demand and
// wind series whose difference reproduces the first toy forecast row, so
// scenario-based evaluation can run at desk scale.
inline Study toy_day_ahead_study() {
  Study s = toy_study();
  s.name = "toy-dayahead";
  s.series.realized_net_load.clear();
  s.series.forecast_net_load.clear();
  s.series.demand = {710, 680, 660, 640};
  s.series.wind = {20, 20, 20, 20};
  s.series.installed_wind_mw = 100.0;
  s.series.alpha_mw = 30.0;
  s.forecast = net_load(s.series.demand, s.series.wind);
  s.config.horizon = 4;
  validate_study(s);
  return s;
}

// Synthetic slow-start fleet for the 24-hour day-ahead study: 54 units in
// five size classes, hourly demand and wind forecasts, installed wind at
// half of peak demand. Unit economics get a seeded spread so the merit
// order is not degenerate; physical parameters stay at class values. Sized
// so that the overnight valley forces deep cycling while system ramp is
// scarce relative to the morning rise plus the requirement adder.
inline Study day_ahead54_study(std::uint64_t seed = 118) {
  Study s;
  s.name = "dayahead54";

  struct Cls {
    int count;
    double pmax, pmin, rr, rsux, lp, nl, su;
    int min_up, min_down;
    std::vector<double> su_traj, sd_traj;
  };
  const std::vector<Cls> classes = {
      {4, 450, 200, 230, 320, 19, 850, 9000, 6, 6, {70, 140, 200}, {200, 140, 70}},
      {6, 320, 140, 180, 230, 24, 600, 5500, 4, 4, {70, 140}, {140, 70}},
      {12, 200, 80, 120, 140, 31, 420, 2800, 3, 3, {40, 80}, {80, 40}},
      {14, 120, 40, 75, 80, 40, 240, 1300, 2, 2, {20, 40}, {40, 20}},
      {18, 60, 20, 40, 40, 55, 110, 450, 2, 2, {10, 20}, {20, 10}},
  };

  std::mt19937_64 rng(seed);
  auto unit_spread = [&rng]() {  // deterministic uniform in [0.92, 1.08]
    double u = (rng() >> 11) * (1.0 / 9007199254740992.0);
    return 0.92 + 0.16 * u;
  };

  int serial = 1;
  for (const auto& c : classes) {
    for (int i = 0; i < c.count; ++i, ++serial) {
      Generator g;
      g.id = "U" + std::to_string(serial);
      g.klass = GenClass::SlowStart;
      g.p_max = c.pmax;
      g.p_min = c.pmin;
      g.ramp_rate = c.rr;
      g.startup_ramp = c.rsux;
      g.shutdown_ramp = c.rsux;
      g.linear_cost = c.lp * unit_spread();
      g.no_load_cost = c.nl * unit_spread();
      g.startup_cost = c.su * unit_spread();
      g.min_up = c.min_up;
      g.min_down = c.min_down;
      g.startup_trajectory = c.su_traj;
      g.shutdown_trajectory = c.sd_traj;
      s.generators.push_back(std::move(g));
    }
  }

  s.series.demand = {4920, 3960, 3480, 2400, 3000, 3600, 4200, 4680,
                     4920, 5280, 5340, 5040, 4800, 4560, 5280, 5400,
                     5100, 5340, 5640, 5880, 6000, 5400, 5220, 4920};
  s.series.wind = {300,   292.5, 307.5, 315,   285,   277.5, 285,   292.5,
                   262.5, 247.5, 255,   292.5, 307.5, 322.5, 307.5, 285,
                   262.5, 240,   225,   217.5, 240,   255,   262.5, 247.5};
  s.series.installed_wind_mw = 3000.0;  // half of the 6000 MW demand peak
  s.forecast = net_load(s.series.demand, s.series.wind);

  // initial state: merit-order commitment against the first-hour net load,
  // minima first, remaining energy to the cheapest committed units
  double target = s.forecast.values.front();
  std::vector<std::size_t> merit(s.generators.size());
  for (std::size_t i = 0; i < merit.size(); ++i) merit[i] = i;
  std::sort(merit.begin(), merit.end(), [&](std::size_t a, std::size_t b) {
    if (s.generators[a].linear_cost != s.generators[b].linear_cost)
      return s.generators[a].linear_cost < s.generators[b].linear_cost;
    return s.generators[a].id < s.generators[b].id;
  });
  std::vector<bool> committed(s.generators.size(), false);
  double cap = 0.0, minsum = 0.0;
  for (std::size_t idx : merit) {
    if (cap >= target * 1.05) break;
    committed[idx] = true;
    cap += s.generators[idx].p_max;
    minsum += s.generators[idx].p_min;
  }
  double rest = target - minsum;
  if (rest < 0.0)
    throw InvariantError("fixture: committed minima exceed first-hour net load");
  for (std::size_t i = 0; i < s.generators.size(); ++i) {
    const auto& g = s.generators[i];
    s.boundary.fixed_commitments[g.id][0] = committed[i] ? 1 : 0;
    s.boundary.initial_power[g.id] = committed[i] ? g.p_min : 0.0;
  }
  for (std::size_t idx : merit) {
    if (!committed[idx] || rest <= 0.0) continue;
    const auto& g = s.generators[idx];
    double add = std::min(rest, g.p_max - g.p_min);
    s.boundary.initial_power[g.id] += add;
    rest -= add;
  }

  s.config.horizon = 24;
  s.config.period_minutes = 60;
  s.config.voll = 9000.0;
  s.config.alpha_multiplier = 3.0;
  s.config.mip_gap = 0.01;
  s.config.formulation = Formulation::Conventional;

  validate_study(s);
  return s;
}

}  // namespace frcuc::fixtures
