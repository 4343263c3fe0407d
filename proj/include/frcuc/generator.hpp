#pragma once

#include <string>
#include <vector>

#include "frcuc/common.hpp"

namespace frcuc {

// must-run models a baseload unit pinned online at constant output
// (p_min == p_max, zero ramp); it needs no special cases downstream.
enum class GenClass { FastStart, SlowStart, MustRun };

inline const char* to_string(GenClass c) {
  switch (c) {
    case GenClass::FastStart: return "fast-start";
    case GenClass::SlowStart: return "slow-start";
    case GenClass::MustRun: return "must-run";
  }
  return "?";
}

struct Generator {
  std::string id;
  GenClass klass = GenClass::FastStart;
  double no_load_cost = 0.0;   // $/period while committed
  double linear_cost = 0.0;    // $/MWh
  double startup_cost = 0.0;   // $ per start
  double p_max = 0.0;          // MW
  double p_min = 0.0;          // MW
  double ramp_rate = 0.0;      // MW/period
  double startup_ramp = 0.0;   // MW/period
  double shutdown_ramp = 0.0;  // MW/period
  std::vector<double> startup_trajectory;   // MW per startup interval, slow-start
  std::vector<double> shutdown_trajectory;  // MW per shutdown interval, slow-start
  int min_up = 1;    // periods
  int min_down = 1;  // periods

  bool slow() const { return klass == GenClass::SlowStart; }
  bool must_run() const { return klass == GenClass::MustRun; }
  int startup_duration() const { return (int)startup_trajectory.size(); }
  int shutdown_duration() const { return (int)shutdown_trajectory.size(); }
  // output in the final startup interval, right before reaching p_min
  double last_startup_point() const {
    return startup_trajectory.empty() ? 0.0 : startup_trajectory.back();
  }
  double first_shutdown_point() const {
    return shutdown_trajectory.empty() ? 0.0 : shutdown_trajectory.front();
  }
};

// Shape checks for a slow-start unit's startup/shutdown profiles: startup
// nondecreasing, shutdown nonincreasing, every point within (0, p_min].
inline void validate_trajectory(const Generator& g) {
  if (!g.slow())
    throw InvariantError("generator '" + g.id + "': trajectory validation applies to slow-start units");
  if (g.startup_trajectory.empty())
    throw InvariantError("generator '" + g.id + "': slow-start unit with empty startup_trajectory");
  if (g.shutdown_trajectory.empty())
    throw InvariantError("generator '" + g.id + "': slow-start unit with empty shutdown_trajectory");
  auto check_point = [&](const char* which, std::size_t k, double v) {
    if (v <= 0.0)
      throw InvariantError("generator '" + g.id + "': " + which + " point " +
                           std::to_string(k + 1) + " must be positive");
    if (v > g.p_min + 1e-9)
      throw InvariantError("generator '" + g.id + "': " + which + " point " +
                           std::to_string(k + 1) + " (" + std::to_string(v) +
                           " MW) exceeds p_min");
  };
  for (std::size_t k = 0; k < g.startup_trajectory.size(); ++k) {
    check_point("startup_trajectory", k, g.startup_trajectory[k]);
    if (k > 0 && g.startup_trajectory[k] < g.startup_trajectory[k - 1] - 1e-9)
      throw InvariantError("generator '" + g.id + "': startup_trajectory decreases at segment " +
                           std::to_string(k) + "->" + std::to_string(k + 1));
  }
  for (std::size_t k = 0; k < g.shutdown_trajectory.size(); ++k) {
    check_point("shutdown_trajectory", k, g.shutdown_trajectory[k]);
    if (k > 0 && g.shutdown_trajectory[k] > g.shutdown_trajectory[k - 1] + 1e-9)
      throw InvariantError("generator '" + g.id + "': shutdown_trajectory increases at segment " +
                           std::to_string(k) + "->" + std::to_string(k + 1));
  }
}

inline void validate_generator(const Generator& g) {
  if (g.id.empty()) throw InvariantError("generator with empty id");
  if (g.p_min < 0.0)
    throw InvariantError("generator '" + g.id + "': p_min < 0");
  if (g.p_min > g.p_max)
    throw InvariantError("generator '" + g.id + "': p_min > p_max");
  if (g.ramp_rate < 0.0 || g.startup_ramp < 0.0 || g.shutdown_ramp < 0.0)
    throw InvariantError("generator '" + g.id + "': negative ramp rate");
  if (g.min_up < 1 || g.min_down < 1)
    throw InvariantError("generator '" + g.id + "': min_up/min_down must be >= 1 period");
  if (g.slow()) {
    validate_trajectory(g);
  } else {
    if (!g.startup_trajectory.empty() || !g.shutdown_trajectory.empty())
      throw InvariantError("generator '" + g.id + "': trajectories are slow-start only");
  }
  if (g.must_run() && std::abs(g.p_min - g.p_max) > 1e-9)
    throw InvariantError("generator '" + g.id + "': must-run requires p_min == p_max");
}

}  // namespace frcuc
