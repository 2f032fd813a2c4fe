// Copyright 2026 The qiblockade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Flat key-value configuration.
//
//   # comment
//   kappa_ghz = 20          absolute rates: ordinary frequency in GHz
//   gamma_ghz = 1
//   eta = 0.1kappa          relative rates: number with optional unit suffix
//   g = 2                   bare numbers are in units of kappa
//   delta_c = 1g
//   theta_pi = 0.082        or: theta = 0.2576 (radians), theta = 0.082pi
//   optimal = red           none | red | blue
//   axis1 = delta_c:-2g:2g:201
//
// Every physical quantity is resolved to units of kappa. Suffixes are kept
// symbolic until a point is resolved, so `delta_c = 1g` follows a swept g.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qiblockade/errors.hpp"
#include "qiblockade/model.hpp"

namespace qiblockade {

enum class Unit { kKappa, kG, kGamma, kEta, kPi, kRadian };

struct Quantity {
  double value = 0.0;
  Unit unit = Unit::kKappa;
};

enum class Mode { kQi, kJc };
enum class Optimal { kNone, kRed, kBlue };

/// Names a sweep axis (or the minimization axis) may take.
inline const std::set<std::string>& sweepable_names() {
  static const std::set<std::string> names{"delta_c", "theta", "omega_rabi", "g", "gamma_d", "eta"};
  return names;
}

struct Axis {
  std::string name;
  Quantity start;
  Quantity stop;
  int count = 0;

  Quantity at(int k) const {
    const double t = static_cast<double>(k) / static_cast<double>(count - 1);
    return {start.value + t * (stop.value - start.value), start.unit};
  }
};

/// Baseline parameters with symbolic units, plus run settings.
struct Config {
  std::map<std::string, Quantity> quantities;  // g, gamma, gamma_d, eta, omega_rabi, delta_c, theta
  std::optional<double> kappa_ghz;
  int n_max = kDefaultNMax;
  RateConvention convention = RateConvention::kHalf;
  Mode mode = Mode::kQi;
  Optimal optimal = Optimal::kNone;

  std::optional<Axis> axis1;
  std::optional<Axis> axis2;
  std::optional<Axis> minimize_over;
  std::vector<std::string> outputs{"n_c", "g2_0"};

  double tau_max = 10.0;  // in units of 1/kappa
  int tau_points = 201;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_number(std::string_view s, const std::string& where) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ValidationError(where + ": invalid number '" + std::string(s) + "'");
  }
  return v;
}

inline int parse_int(std::string_view s, const std::string& where) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(where + ": invalid integer '" + std::string(s) + "'");
  }
  return v;
}

/// Units each relative quantity may carry. The first entry is the default.
inline const std::vector<std::pair<std::string, Unit>>& allowed_units(const std::string& name) {
  static const std::map<std::string, std::vector<std::pair<std::string, Unit>>> table{
      {"g", {{"kappa", Unit::kKappa}}},
      {"gamma", {{"kappa", Unit::kKappa}}},
      {"eta", {{"kappa", Unit::kKappa}, {"g", Unit::kG}}},
      {"gamma_d", {{"kappa", Unit::kKappa}, {"gamma", Unit::kGamma}, {"g", Unit::kG}}},
      {"omega_rabi", {{"kappa", Unit::kKappa}, {"g", Unit::kG}, {"eta", Unit::kEta}}},
      {"delta_c", {{"kappa", Unit::kKappa}, {"g", Unit::kG}}},
      {"theta", {{"rad", Unit::kRadian}, {"pi", Unit::kPi}}},
  };
  auto it = table.find(name);
  if (it == table.end()) throw ValidationError("'" + name + "' is not a configurable quantity");
  return it->second;
}

inline Quantity parse_quantity(const std::string& name, std::string_view text, const std::string& where) {
  const auto& units = allowed_units(name);
  for (const auto& [suffix, unit] : units) {
    if (text.size() > suffix.size() && text.ends_with(suffix)) {
      const std::string_view number = trim(text.substr(0, text.size() - suffix.size()));
      return {parse_number(number, where + " (" + name + ")"), unit};
    }
  }
  return {parse_number(text, where + " (" + name + ")"), units.front().second};
}

}  // namespace detail

inline Axis parse_axis(std::string_view text, const std::string& where) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto colon = text.find(':', pos);
    parts.push_back(detail::trim(text.substr(pos, colon == std::string_view::npos ? colon : colon - pos)));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (parts.size() != 4) throw ValidationError(where + ": axis must be name:start:stop:count");
  Axis a;
  a.name = std::string(parts[0]);
  if (!sweepable_names().contains(a.name)) {
    throw ValidationError(where + ": '" + a.name + "' cannot be swept");
  }
  a.start = detail::parse_quantity(a.name, parts[1], where);
  a.stop = detail::parse_quantity(a.name, parts[2], where);
  a.count = detail::parse_int(parts[3], where);
  if (a.count < 2) throw ValidationError(where + ": axis count must be >= 2");
  if (a.start.unit != a.stop.unit) throw ValidationError(where + ": axis start and stop need the same unit");
  if (a.start.value == a.stop.value) throw ValidationError(where + ": axis start equals stop");
  return a;
}

/// Parses config text. `source` prefixes error messages.
inline Config parse_config(std::istream& in, const std::string& source = "config") {
  static const std::set<std::string> quantity_keys{"g", "gamma", "gamma_d", "eta", "omega_rabi", "delta_c"};
  static const std::set<std::string> lab_keys{"omega_c_ghz", "omega_a_ghz", "omega_p_ghz", "omega_l_ghz"};

  Config cfg;
  std::map<std::string, std::string> seen;  // quantity -> key spelling, for mixing checks
  std::map<std::string, double> absolute;   // quantity -> GHz
  std::map<std::string, double> lab;
  std::optional<Quantity> kappa_relative;
  std::set<std::string> keys;

  std::string line;
  int line_no = 0;
  auto claim = [&](const std::string& quantity, const std::string& key, const std::string& where) {
    auto [it, inserted] = seen.emplace(quantity, key);
    if (!inserted) {
      throw ValidationError(where + ": '" + key + "' conflicts with earlier '" + it->second + "'");
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = detail::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where + ": expected 'key = value'");
    const std::string key(detail::trim(view.substr(0, eq)));
    const std::string_view value = detail::trim(view.substr(eq + 1));
    if (key.empty() || value.empty()) throw ValidationError(where + ": expected 'key = value'");
    if (!keys.insert(key).second) throw ValidationError(where + ": duplicate key '" + key + "'");

    if (quantity_keys.contains(key)) {
      claim(key, key, where);
      cfg.quantities[key] = detail::parse_quantity(key, value, where);
    } else if (key.ends_with("_ghz") && quantity_keys.contains(key.substr(0, key.size() - 4))) {
      const std::string q = key.substr(0, key.size() - 4);
      claim(q, key, where);
      absolute[q] = detail::parse_number(value, where);
    } else if (key == "kappa") {
      claim("kappa", key, where);
      kappa_relative = detail::parse_quantity("g", value, where);
    } else if (key == "kappa_ghz") {
      claim("kappa", key, where);
      cfg.kappa_ghz = detail::parse_number(value, where);
      if (!(*cfg.kappa_ghz > 0.0)) throw ValidationError(where + ": kappa_ghz must be > 0");
    } else if (key == "theta" || key == "theta_pi") {
      claim("theta", key, where);
      Quantity q = detail::parse_quantity("theta", value, where);
      if (key == "theta_pi") {
        if (q.unit != Unit::kRadian) throw ValidationError(where + ": theta_pi takes a bare number");
        q.unit = Unit::kPi;
      }
      cfg.quantities["theta"] = q;
    } else if (lab_keys.contains(key)) {
      lab[key] = detail::parse_number(value, where);
    } else if (key == "n_max") {
      cfg.n_max = detail::parse_int(value, where);
      if (cfg.n_max < 2) throw ValidationError(where + ": n_max must be >= 2");
    } else if (key == "convention") {
      cfg.convention = parse_convention(std::string(value));
    } else if (key == "mode") {
      if (value == "qi") cfg.mode = Mode::kQi;
      else if (value == "jc") cfg.mode = Mode::kJc;
      else throw ValidationError(where + ": mode must be 'qi' or 'jc'");
    } else if (key == "optimal") {
      if (value == "none") cfg.optimal = Optimal::kNone;
      else if (value == "red") cfg.optimal = Optimal::kRed;
      else if (value == "blue") cfg.optimal = Optimal::kBlue;
      else throw ValidationError(where + ": optimal must be none, red or blue");
    } else if (key == "axis1") {
      cfg.axis1 = parse_axis(value, where);
    } else if (key == "axis2") {
      cfg.axis2 = parse_axis(value, where);
    } else if (key == "minimize_over") {
      cfg.minimize_over = parse_axis(value, where);
    } else if (key == "outputs") {
      cfg.outputs.clear();
      std::string item;
      std::istringstream items{std::string(value)};
      while (std::getline(items, item, ',')) {
        const std::string name(detail::trim(item));
        if (name != "n_c" && name != "g2_0" && name != "p_n") {
          throw ValidationError(where + ": unknown output '" + name + "'");
        }
        cfg.outputs.push_back(name);
      }
      if (cfg.outputs.empty()) throw ValidationError(where + ": outputs is empty");
    } else if (key == "tau_max") {
      cfg.tau_max = detail::parse_number(value, where);
      if (!(cfg.tau_max > 0.0)) throw ValidationError(where + ": tau_max must be > 0");
    } else if (key == "tau_points") {
      cfg.tau_points = detail::parse_int(value, where);
      if (cfg.tau_points < 1) throw ValidationError(where + ": tau_points must be >= 1");
    } else {
      throw ValidationError(where + ": unknown key '" + key + "'");
    }
  }

  if (!seen.contains("kappa")) throw ValidationError(source + ": missing kappa (set kappa_ghz or kappa = 1)");
  if (kappa_relative && !(kappa_relative->value == 1.0)) {
    throw ValidationError(source + ": kappa in units of kappa must be 1");
  }
  for (const auto& [q, ghz] : absolute) {
    if (!cfg.kappa_ghz) throw ValidationError(source + ": '" + q + "_ghz' needs kappa_ghz");
    cfg.quantities[q] = Quantity{ghz / *cfg.kappa_ghz, Unit::kKappa};
  }
  if (!lab.empty()) {
    if (lab.size() != lab_keys.size()) {
      throw ValidationError(source + ": lab frequencies need all of omega_c_ghz, omega_a_ghz, omega_p_ghz, omega_l_ghz");
    }
    if (cfg.quantities.contains("delta_c")) throw ValidationError(source + ": delta_c conflicts with lab frequencies");
    if (!cfg.kappa_ghz) throw ValidationError(source + ": lab frequencies need kappa_ghz");
    const double dc = detuning_from_lab(lab["omega_c_ghz"], lab["omega_a_ghz"], lab["omega_p_ghz"], lab["omega_l_ghz"]);
    cfg.quantities["delta_c"] = Quantity{dc / *cfg.kappa_ghz, Unit::kKappa};
  }
  if (cfg.mode == Mode::kJc && cfg.optimal != Optimal::kNone) {
    throw ValidationError(source + ": optimal conditions need mode = qi");
  }
  if (cfg.axis2 && !cfg.axis1) throw ValidationError(source + ": axis2 without axis1");
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  return parse_config(in, path);
}

/// Paper-scale defaults used for quantities a config leaves unset, in units
/// of kappa: g = 2, gamma = 0.05, gamma_d = 0, eta = 0.1, omega_rabi = 0,
/// theta = 0, delta_c = 1g.
inline const std::map<std::string, Quantity>& default_quantities() {
  static const std::map<std::string, Quantity> d{
      {"g", {2.0, Unit::kKappa}},       {"gamma", {0.05, Unit::kKappa}},    {"gamma_d", {0.0, Unit::kKappa}},
      {"eta", {0.1, Unit::kKappa}},     {"omega_rabi", {0.0, Unit::kKappa}}, {"theta", {0.0, Unit::kRadian}},
      {"delta_c", {1.0, Unit::kG}},
  };
  return d;
}

/// Resolves the config at one point. `overrides` replace baseline quantities
/// (axis values). Applies `optimal` and `mode`, then validates.
inline SystemParams resolve(const Config& cfg, const std::map<std::string, Quantity>& overrides = {}) {
  auto pick = [&](const std::string& name) {
    if (auto it = overrides.find(name); it != overrides.end()) return it->second;
    if (auto it = cfg.quantities.find(name); it != cfg.quantities.end()) return it->second;
    return default_quantities().at(name);
  };
  SystemParams p;
  p.kappa = 1.0;
  p.n_max = cfg.n_max;
  p.rate_convention = cfg.convention;

  auto scale = [&](const std::string& name, Quantity q) -> double {
    switch (q.unit) {
      case Unit::kKappa: return q.value * p.kappa;
      case Unit::kG: return q.value * p.g;
      case Unit::kGamma: return q.value * p.gamma;
      case Unit::kEta: return q.value * p.eta;
      case Unit::kPi: return q.value * std::numbers::pi;
      case Unit::kRadian: return q.value;
    }
    throw ValidationError("unresolvable unit for " + name);
  };
  // Order matters: later quantities may be expressed in earlier ones.
  p.g = scale("g", pick("g"));
  p.gamma = scale("gamma", pick("gamma"));
  p.eta = scale("eta", pick("eta"));
  p.gamma_d = scale("gamma_d", pick("gamma_d"));
  p.omega_rabi = scale("omega_rabi", pick("omega_rabi"));
  p.delta_c = scale("delta_c", pick("delta_c"));
  p.theta = scale("theta", pick("theta"));

  const bool pinned_theta = overrides.contains("theta");
  const bool pinned_omega = overrides.contains("omega_rabi");
  if (cfg.optimal != Optimal::kNone) {
    const OptimalConditions oc = optimal_conditions(p);
    if (!pinned_theta) p.theta = cfg.optimal == Optimal::kRed ? oc.theta_opt_red : oc.theta_opt_blue;
    if (!pinned_omega) p.omega_rabi = oc.omega_opt;
  }
  if (cfg.mode == Mode::kJc) p.omega_rabi = 0.0;
  return p.validated();
}

}  // namespace qiblockade
