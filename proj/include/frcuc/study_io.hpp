#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "frcuc/frc.hpp"
#include "frcuc/system.hpp"

namespace frcuc {

inline constexpr int kStudyFormatVersion = 1;

namespace io_detail {

using nlohmann::json;

template <typename T>
T require(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key))
    throw ParseError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": field '" + key + "': " + e.what());
  }
}

template <typename T>
T optional_or(const json& j, const std::string& where, const std::string& key, T def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": field '" + key + "': " + e.what());
  }
}

inline GenClass parse_class(const std::string& s, const std::string& where) {
  if (s == "fast-start") return GenClass::FastStart;
  if (s == "slow-start") return GenClass::SlowStart;
  if (s == "must-run") return GenClass::MustRun;
  throw ParseError(where + ": unknown generator class '" + s + "'");
}

inline Formulation parse_formulation(const std::string& s, const std::string& where) {
  if (s == "conventional") return Formulation::Conventional;
  if (s == "proposed") return Formulation::Proposed;
  throw ParseError(where + ": unknown formulation '" + s + "'");
}

}  // namespace io_detail

inline Study study_from_json(const nlohmann::json& j) {
  using io_detail::optional_or;
  using io_detail::require;

  int version = require<int>(j, "study", "frcuc_study");
  if (version != kStudyFormatVersion)
    throw ParseError("study: unsupported format version " + std::to_string(version));

  Study s;
  s.name = optional_or<std::string>(j, "study", "name", "unnamed");

  const auto& jc = j.at("config");
  s.config.horizon = require<int>(jc, "config", "horizon");
  s.config.period_minutes = require<int>(jc, "config", "period_minutes");
  s.config.voll = require<double>(jc, "config", "voll");
  s.config.alpha_multiplier = optional_or<double>(jc, "config", "alpha_multiplier", 3.0);
  s.config.mip_gap = optional_or<double>(jc, "config", "mip_gap", 1e-3);
  s.config.formulation = io_detail::parse_formulation(
      optional_or<std::string>(jc, "config", "formulation", "conventional"), "config");
  s.config.sigma_demand_frac = optional_or<double>(jc, "config", "sigma_demand_frac", 0.01);
  s.config.sigma_wind_frac = optional_or<double>(jc, "config", "sigma_wind_frac", 0.04);

  if (!j.contains("generators") || !j.at("generators").is_array())
    throw ParseError("study: missing 'generators' array");
  for (const auto& jg : j.at("generators")) {
    Generator g;
    g.id = require<std::string>(jg, "generator", "id");
    std::string where = "generator '" + g.id + "'";
    g.klass = io_detail::parse_class(require<std::string>(jg, where, "class"), where);
    g.no_load_cost = require<double>(jg, where, "no_load_cost");
    g.linear_cost = require<double>(jg, where, "linear_cost");
    g.startup_cost = require<double>(jg, where, "startup_cost");
    g.p_max = require<double>(jg, where, "p_max");
    g.p_min = require<double>(jg, where, "p_min");
    g.ramp_rate = require<double>(jg, where, "ramp_rate");
    g.startup_ramp = require<double>(jg, where, "startup_ramp");
    g.shutdown_ramp = require<double>(jg, where, "shutdown_ramp");
    g.min_up = optional_or<int>(jg, where, "min_up", 1);
    g.min_down = optional_or<int>(jg, where, "min_down", 1);
    g.startup_trajectory =
        optional_or<std::vector<double>>(jg, where, "startup_trajectory", {});
    g.shutdown_trajectory =
        optional_or<std::vector<double>>(jg, where, "shutdown_trajectory", {});
    s.generators.push_back(std::move(g));
  }

  if (j.contains("boundary")) {
    const auto& jb = j.at("boundary");
    if (jb.contains("initial_power"))
      for (const auto& [id, v] : jb.at("initial_power").items())
        s.boundary.initial_power[id] = v.get<double>();
    if (jb.contains("fixed_commitments"))
      for (const auto& [id, m] : jb.at("fixed_commitments").items())
        for (const auto& [t, v] : m.items())
          s.boundary.fixed_commitments[id][std::stoi(t)] = v.get<int>();
  }

  if (j.contains("series")) {
    const auto& js = j.at("series");
    s.series.demand = optional_or<std::vector<double>>(js, "series", "demand", {});
    s.series.wind = optional_or<std::vector<double>>(js, "series", "wind", {});
    s.series.installed_wind_mw = optional_or<double>(js, "series", "installed_wind_mw", 0.0);
    if (js.contains("alpha_mw")) s.series.alpha_mw = js.at("alpha_mw").get<double>();
    s.series.realized_net_load =
        optional_or<std::vector<double>>(js, "series", "realized_net_load", {});
    if (js.contains("forecast_net_load"))
      s.series.forecast_net_load =
          js.at("forecast_net_load").get<std::vector<std::vector<double>>>();
  }

  // the working forecast: first rolling row when present, else demand - wind
  if (!s.series.forecast_net_load.empty()) {
    s.forecast.values = s.series.forecast_net_load.front();
    s.forecast.first_is_realized = true;
  } else if (!s.series.demand.empty()) {
    s.forecast = net_load(s.series.demand, s.series.wind);
    s.forecast.first_is_realized = false;
  } else {
    throw ParseError("study: series must provide forecast_net_load or demand/wind");
  }

  validate_study(s);
  return s;
}

inline Study load_system(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open study file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("study file '" + path + "': " + e.what());
  }
  try {
    return study_from_json(j);
  } catch (ParseError&) {
    throw;
  } catch (InvariantError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("study file '" + path + "': " + e.what());
  }
}

inline nlohmann::json study_to_json(const Study& s) {
  nlohmann::json j;
  j["frcuc_study"] = kStudyFormatVersion;
  j["name"] = s.name;
  nlohmann::json jc;
  jc["horizon"] = s.config.horizon;
  jc["period_minutes"] = s.config.period_minutes;
  jc["voll"] = s.config.voll;
  jc["alpha_multiplier"] = s.config.alpha_multiplier;
  jc["mip_gap"] = s.config.mip_gap;
  jc["formulation"] = to_string(s.config.formulation);
  jc["sigma_demand_frac"] = s.config.sigma_demand_frac;
  jc["sigma_wind_frac"] = s.config.sigma_wind_frac;
  j["config"] = jc;
  j["generators"] = nlohmann::json::array();
  for (const auto& g : s.generators) {
    nlohmann::json jg;
    jg["id"] = g.id;
    jg["class"] = to_string(g.klass);
    jg["no_load_cost"] = g.no_load_cost;
    jg["linear_cost"] = g.linear_cost;
    jg["startup_cost"] = g.startup_cost;
    jg["p_max"] = g.p_max;
    jg["p_min"] = g.p_min;
    jg["ramp_rate"] = g.ramp_rate;
    jg["startup_ramp"] = g.startup_ramp;
    jg["shutdown_ramp"] = g.shutdown_ramp;
    jg["min_up"] = g.min_up;
    jg["min_down"] = g.min_down;
    if (!g.startup_trajectory.empty()) jg["startup_trajectory"] = g.startup_trajectory;
    if (!g.shutdown_trajectory.empty()) jg["shutdown_trajectory"] = g.shutdown_trajectory;
    j["generators"].push_back(jg);
  }
  nlohmann::json jb;
  for (const auto& [id, p] : s.boundary.initial_power) jb["initial_power"][id] = p;
  for (const auto& [id, m] : s.boundary.fixed_commitments)
    for (const auto& [t, v] : m)
      jb["fixed_commitments"][id][std::to_string(t)] = v;
  j["boundary"] = jb;
  nlohmann::json js;
  if (!s.series.demand.empty()) js["demand"] = s.series.demand;
  if (!s.series.wind.empty()) js["wind"] = s.series.wind;
  if (s.series.installed_wind_mw != 0.0)
    js["installed_wind_mw"] = s.series.installed_wind_mw;
  if (s.series.alpha_mw) js["alpha_mw"] = *s.series.alpha_mw;
  if (!s.series.realized_net_load.empty())
    js["realized_net_load"] = s.series.realized_net_load;
  if (!s.series.forecast_net_load.empty())
    js["forecast_net_load"] = s.series.forecast_net_load;
  j["series"] = js;
  return j;
}

inline void save_system(const Study& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << study_to_json(s).dump(2) << '\n';
  if (!os) throw IoError("write failed for '" + path + "'");
}

// Per-period requirement adder for a window of the study's horizon.
// Priority: explicit constant alpha, else the sigma model over demand.
inline std::vector<double> study_alpha_series(const Study& s, std::size_t periods) {
  if (s.series.alpha_mw) return std::vector<double>(periods, *s.series.alpha_mw);
  if (s.series.demand.empty())
    throw InvariantError("study provides neither alpha_mw nor demand series for alpha");
  auto a = compute_alpha(s.series.demand, s.series.installed_wind_mw,
                         s.config.alpha_multiplier, s.config.sigma_demand_frac,
                         s.config.sigma_wind_frac);
  if (a.size() < periods)
    throw InvariantError("demand series shorter than requested alpha window");
  a.resize(periods);
  return a;
}

}  // namespace frcuc
