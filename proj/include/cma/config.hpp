#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "cma/common.hpp"

namespace cma {

/// Run configuration parsed from a sectioned key = value file. Unknown
/// sections or keys are rejected; grid dimensions are required.
struct RunConfig {
  // [grid]
  int nx = 32, ny = 32, nz = 32;
  double Lx = kTwoPi, Ly = kTwoPi, Lz = kTwoPi;
  // [state]
  int epsilon = +1;
  std::string fixture = "qs";  // qs | qs- | wave | wave_num | rand
  std::string snapshot;        // overrides fixture when set
  unsigned long seed = 1234;
  double amplitude = 1e-3;
  int max_mode = 3;
  int taper_power = 8;
  double delta_a = 0.1;
  // [background] (wave fixture parameters)
  double wave_amplitude = 0.01;
  double wave_number = 1.0;
  // [run]
  double dt = 1e-3;
  double T = 0.1;
  int snapshot_every = 0;  // 0 = none
  std::string out_dir = "out";
  // [filter]
  bool filter_enabled = false;
  double filter_strength = 36.0;
  int filter_order = 18;
  double filter_cutoff = 1.0;
  // [collar]
  double collar_width = 0.1;
  double collar_tol = 1e-6;
  // [monitor]
  std::string densities = "H1,H2rot,H3,H4,Halpha(z),Halpha(wave),Hbeta(y),Hbeta(z)";
  double growth_budget = 1e6;
  // [tolerances]
  double tol_scale = 1.0;
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());

  std::map<std::string, std::map<std::string, std::string>> kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string s = detail::trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": malformed section header");
      section = detail::trim(s.substr(1, s.size() - 2));
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = detail::trim(s.substr(0, eq));
    std::string val = detail::trim(s.substr(eq + 1));
    if (!kv[section].emplace(key, val).second)
      throw ConfigError("duplicate key " + section + "." + key);
  }

  RunConfig cfg;
  std::set<std::string> seen;
  auto take = [&](const std::string& sec, const std::string& key)
      -> std::optional<std::string> {
    seen.insert(sec + "." + key);
    auto si = kv.find(sec);
    if (si == kv.end()) return std::nullopt;
    auto ki = si->second.find(key);
    if (ki == si->second.end()) return std::nullopt;
    return ki->second;
  };
  auto as_int = [&](const std::string& sec, const std::string& key, int& out,
                    bool required = false) {
    auto v = take(sec, key);
    if (!v) {
      if (required)
        throw ConfigError("missing required key " + sec + "." + key);
      return;
    }
    try {
      out = std::stoi(*v);
    } catch (...) {
      throw ConfigError("key " + sec + "." + key + ": not an integer: " + *v);
    }
  };
  auto as_ulong = [&](const std::string& sec, const std::string& key,
                      unsigned long& out) {
    auto v = take(sec, key);
    if (!v) return;
    try {
      out = std::stoul(*v);
    } catch (...) {
      throw ConfigError("key " + sec + "." + key + ": not an integer: " + *v);
    }
  };
  auto as_double = [&](const std::string& sec, const std::string& key,
                       double& out) {
    auto v = take(sec, key);
    if (!v) return;
    try {
      size_t pos = 0;
      out = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
    } catch (...) {
      throw ConfigError("key " + sec + "." + key + ": not a number: " + *v);
    }
  };
  auto as_bool = [&](const std::string& sec, const std::string& key,
                     bool& out) {
    auto v = take(sec, key);
    if (!v) return;
    if (*v == "true" || *v == "on" || *v == "1")
      out = true;
    else if (*v == "false" || *v == "off" || *v == "0")
      out = false;
    else
      throw ConfigError("key " + sec + "." + key + ": not a boolean: " + *v);
  };
  auto as_string = [&](const std::string& sec, const std::string& key,
                       std::string& out) {
    auto v = take(sec, key);
    if (v) out = *v;
  };

  as_int("grid", "nx", cfg.nx, true);
  as_int("grid", "ny", cfg.ny, true);
  as_int("grid", "nz", cfg.nz, true);
  as_double("grid", "Lx", cfg.Lx);
  as_double("grid", "Ly", cfg.Ly);
  as_double("grid", "Lz", cfg.Lz);
  as_int("state", "epsilon", cfg.epsilon);
  as_string("state", "fixture", cfg.fixture);
  as_string("state", "snapshot", cfg.snapshot);
  as_ulong("state", "seed", cfg.seed);
  as_double("state", "amplitude", cfg.amplitude);
  as_int("state", "max_mode", cfg.max_mode);
  as_int("state", "taper_power", cfg.taper_power);
  as_double("state", "delta_a", cfg.delta_a);
  as_double("background", "wave_amplitude", cfg.wave_amplitude);
  as_double("background", "wave_number", cfg.wave_number);
  as_double("run", "dt", cfg.dt);
  as_double("run", "T", cfg.T);
  as_int("run", "snapshot_every", cfg.snapshot_every);
  as_string("run", "out_dir", cfg.out_dir);
  as_bool("filter", "enabled", cfg.filter_enabled);
  as_double("filter", "strength", cfg.filter_strength);
  as_int("filter", "order", cfg.filter_order);
  as_double("filter", "cutoff", cfg.filter_cutoff);
  as_double("collar", "width_fraction", cfg.collar_width);
  as_double("collar", "tolerance", cfg.collar_tol);
  as_string("monitor", "densities", cfg.densities);
  as_double("monitor", "growth_budget", cfg.growth_budget);
  as_double("tolerances", "scale", cfg.tol_scale);

  for (const auto& [sec, keys] : kv)
    for (const auto& [key, val] : keys)
      if (!seen.count(sec + "." + key))
        throw ConfigError("unknown key " + sec + "." + key);

  for (auto [name, v] :
       {std::pair{"run.dt", cfg.dt}, {"collar.tolerance", cfg.collar_tol},
        {"monitor.growth_budget", cfg.growth_budget},
        {"tolerances.scale", cfg.tol_scale}})
    if (!(v > 0)) throw ConfigError(std::string(name) + " must be positive");
  return cfg;
}

}  // namespace cma
