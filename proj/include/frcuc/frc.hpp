#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "frcuc/system.hpp"

namespace frcuc {

// Ramping-capability requirements for periods 1..T-1 of a horizon (there is
// no requirement out of the final period; the next net load is unknown).
struct FrcRequirements {
  std::vector<double> upward;    // MW, index t covers the ramp into t+1
  std::vector<double> downward;  // MW
  std::vector<double> alpha;     // MW adder actually applied per period
};

// upward[t] = max(nl[t+1] - nl[t] + alpha[t], 0); downward mirrors the drop.
// The series' first entry may be a realized value rather than a forecast;
// the arithmetic is identical either way.
inline FrcRequirements compute_requirements(const NetLoadForecast& nl,
                                            const std::vector<double>& alpha) {
  if (nl.values.size() < 2)
    throw InvariantError("compute_requirements: need at least 2 periods");
  std::size_t n = nl.values.size() - 1;
  if (alpha.size() < n)
    throw InvariantError("compute_requirements: alpha has " +
                         std::to_string(alpha.size()) + " entries, need " +
                         std::to_string(n));
  FrcRequirements r;
  r.upward.reserve(n);
  r.downward.reserve(n);
  r.alpha.assign(alpha.begin(), alpha.begin() + n);
  for (std::size_t t = 0; t < n; ++t) {
    double delta = nl.values[t + 1] - nl.values[t];
    r.upward.push_back(std::max(delta + alpha[t], 0.0));
    r.downward.push_back(std::max(-delta + alpha[t], 0.0));
  }
  return r;
}

// Requirement adder covering net-load forecast error: k standard deviations
// of the combined error, with demand error scaling with forecast demand and
// wind error with installed capacity. The two zero-mean errors are
// independent, hence the quadrature sum.
inline std::vector<double> compute_alpha(const std::vector<double>& demand_forecast,
                                         double installed_wind_mw, double k,
                                         double sigma_d_frac = 0.01,
                                         double sigma_w_frac = 0.04) {
  if (sigma_d_frac < 0.0 || sigma_w_frac < 0.0)
    throw InvariantError("compute_alpha: sigma fractions must be >= 0");
  std::vector<double> out;
  out.reserve(demand_forecast.size());
  double wind_term = sigma_w_frac * installed_wind_mw;
  for (double d : demand_forecast) {
    double demand_term = sigma_d_frac * d;
    out.push_back(k * std::hypot(demand_term, wind_term));
  }
  return out;
}

}  // namespace frcuc
