// Copyright 2026 The hdqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HDQKD_SIM_CONFIG_HPP_
#define HDQKD_SIM_CONFIG_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hdqkd/atmosphere.hpp"
#include "hdqkd/depolarizing.hpp"
#include "hdqkd/errors.hpp"
#include "hdqkd/protocol.hpp"
#include "json.hpp"

namespace hdqkd::sim {

enum class SweepKind { kNoise, kZenith, kLength, kPdt, kPdr, kTolerance };

inline std::string_view to_string(SweepKind k) {
  switch (k) {
    case SweepKind::kNoise:
      return "noise";
    case SweepKind::kZenith:
      return "zenith";
    case SweepKind::kLength:
      return "length";
    case SweepKind::kPdt:
      return "pdt";
    case SweepKind::kPdr:
      return "pdr";
    case SweepKind::kTolerance:
      return "tolerance";
  }
  return "noise";
}

inline SweepKind parse_sweep_kind(std::string_view s) {
  for (SweepKind k : {SweepKind::kNoise, SweepKind::kZenith, SweepKind::kLength,
                      SweepKind::kPdt, SweepKind::kPdr, SweepKind::kTolerance}) {
    if (to_string(k) == s) return k;
  }
  throw DomainError("field 'sweep' = '" + std::string(s) +
                    "' must be one of noise, zenith, length, pdt, pdr, "
                    "tolerance");
}

// True for sweeps that sample the atmospheric channel.
inline bool is_stochastic(SweepKind k) {
  return k == SweepKind::kZenith || k == SweepKind::kLength ||
         k == SweepKind::kPdt || k == SweepKind::kPdr;
}

/// Scene fields set explicitly in the configuration; unset fields take the
/// direction's table optics and the weather preset.
struct SceneOverrides {
  std::optional<double> L_bar;
  std::optional<double> h_bar;
  std::optional<double> lambda;
  std::optional<double> W0;
  std::optional<double> r_ap;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> cn2;
  std::optional<double> n0;
  PointingModel pointing_model = PointingModel::kAlphaLSquared;
};

struct SimulationConfig {
  std::string protocol = "both";
  std::vector<Protocol> protocols;
  SweepKind sweep = SweepKind::kNoise;
  std::vector<int> d_list;
  std::vector<double> q_list;
  double xi = 1.0;
  std::vector<LinkDirection> directions;
  std::vector<std::string> weathers;
  SceneOverrides scene;
  std::vector<double> zenith_grid_deg;
  std::vector<double> length_grid_m;
  std::size_t n_samples = 10000;
  std::size_t n_bins = 100;
  std::optional<int> rounding_decimals;
  std::uint64_t seed = 0;
  bool bb84_qber_proxy = true;
  std::string output_path;
  std::string format = "csv";

  /// Scene for one grid point.
  ChannelScene make_scene(LinkDirection direction, const std::string& weather,
                          double zenith_deg) const {
    ChannelScene s = default_scene(direction, weather);
    if (scene.L_bar) s.L_bar = *scene.L_bar;
    if (scene.h_bar) s.h_bar = *scene.h_bar;
    if (scene.lambda) s.lambda = *scene.lambda;
    if (scene.W0) s.W0 = *scene.W0;
    if (scene.r_ap) s.r_ap = *scene.r_ap;
    if (scene.alpha) s.alpha = *scene.alpha;
    if (scene.beta) s.beta = *scene.beta;
    if (scene.cn2) s.cn2 = *scene.cn2;
    if (scene.n0) s.n0 = *scene.n0;
    s.pointing_model = scene.pointing_model;
    s.zenith = deg_to_rad(zenith_deg);
    s.validate();
    return s;
  }

  /// Label written to records: the preset name, or "custom" when Cn2 or n0
  /// were overridden.
  std::string weather_label(const std::string& weather) const {
    return (scene.cn2 || scene.n0) ? "custom" : weather;
  }

  double L_bar() const { return scene.L_bar.value_or(500e3); }
};

namespace detail {

inline std::vector<double> arange(double start, double stop, double step) {
  std::vector<double> v;
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= n; ++i) v.push_back(start + i * step);
  return v;
}

[[noreturn]] inline void invalid(std::string_view field, const nlohmann::json& value,
                                 std::string_view constraint) {
  std::ostringstream msg;
  msg << "field '" << field << "' = " << value.dump() << " violates: "
      << constraint;
  throw DomainError(msg.str());
}

inline double get_number(const nlohmann::json& doc, std::string_view key,
                         std::string_view constraint = "must be a number") {
  const auto& v = doc.at(std::string(key));
  if (!v.is_number()) invalid(key, v, constraint);
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(key, v, "must be finite");
  return x;
}

inline std::optional<double> get_positive(const nlohmann::json& doc,
                                          std::string_view key,
                                          bool allow_zero) {
  if (!doc.contains(std::string(key))) return std::nullopt;
  const double x = get_number(doc, key);
  if (allow_zero ? x < 0.0 : x <= 0.0) {
    invalid(key, doc.at(std::string(key)), allow_zero ? "must be >= 0" : "must be > 0");
  }
  return x;
}

inline std::size_t get_count(const nlohmann::json& doc, std::string_view key) {
  const auto& v = doc.at(std::string(key));
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    invalid(key, v, "must be an integer >= 1");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

inline std::vector<double> get_number_list(const nlohmann::json& doc,
                                           std::string_view key) {
  const auto& v = doc.at(std::string(key));
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) invalid(key, v, "must be a list of numbers");
  if (v.empty()) invalid(key, v, "must be non-empty");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number() || !std::isfinite(e.get<double>())) {
      invalid(key, v, "must contain only finite numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

inline std::vector<std::string> get_string_list(const nlohmann::json& doc,
                                                std::string_view key) {
  const auto& v = doc.at(std::string(key));
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) invalid(key, v, "must be a string or list of strings");
  if (v.empty()) invalid(key, v, "must be non-empty");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) invalid(key, v, "must contain only strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "protocol",   "sweep",     "d_list",        "q_list",
      "xi",         "direction", "weather",       "zenith_grid",
      "length_grid", "n_samples", "n_bins",        "rounding_decimals",
      "seed",       "output_path", "format",      "L_bar",
      "h_bar",      "lambda",    "W0",            "r_ap",
      "alpha",      "beta",      "Cn2",           "n0",
      "pointing_model", "bb84_qber_proxy"};
  return keys;
}

}  // namespace detail

/// Validates a parsed configuration document and fills defaults.
inline SimulationConfig config_from_json(const nlohmann::json& doc) {
  using detail::invalid;
  if (!doc.is_object()) {
    throw DomainError("configuration must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!detail::known_keys().count(key)) {
      throw DomainError("unknown configuration key '" + key + "'");
    }
  }

  SimulationConfig cfg;

  if (doc.contains("sweep")) {
    if (!doc["sweep"].is_string()) invalid("sweep", doc["sweep"], "must be a string");
    cfg.sweep = parse_sweep_kind(doc["sweep"].get<std::string>());
  }

  if (doc.contains("protocol")) {
    if (!doc["protocol"].is_string()) {
      invalid("protocol", doc["protocol"], "must be ext_b92, bb84 or both");
    }
    cfg.protocol = doc["protocol"].get<std::string>();
  }
  if (cfg.protocol == "both") {
    cfg.protocols = {Protocol::kExtB92, Protocol::kBb84};
  } else if (cfg.protocol == "ext_b92" || cfg.protocol == "bb84") {
    cfg.protocols = {parse_protocol(cfg.protocol)};
  } else {
    invalid("protocol", doc["protocol"], "must be ext_b92, bb84 or both");
  }

  const bool stochastic = is_stochastic(cfg.sweep);

  if (doc.contains("d_list")) {
    const auto& v = doc["d_list"];
    if (!v.is_array() || v.empty()) invalid("d_list", v, "must be a non-empty list");
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<long long>() < 2) {
        invalid("d_list", v, "every dimension must be an integer >= 2");
      }
      cfg.d_list.push_back(static_cast<int>(e.get<long long>()));
    }
  } else if (stochastic) {
    cfg.d_list = {32};
  } else {
    cfg.d_list = {2, 4, 8, 16, 32};
  }

  if (doc.contains("q_list")) {
    cfg.q_list = detail::get_number_list(doc, "q_list");
  } else if (cfg.sweep == SweepKind::kNoise) {
    cfg.q_list = detail::arange(0.0, 0.35, 0.005);
  } else {
    cfg.q_list = {0.0};
  }
  for (int d : cfg.d_list) {
    for (double q : cfg.q_list) {
      if (!(q >= 0.0 && q <= max_depolarizing_noise(d))) {
        std::ostringstream c;
        c << "every q must lie in [0, (d-1)/d]; for d = " << d
          << " the bound (d-1)/d = " << max_depolarizing_noise(d);
        invalid("q_list", q, c.str());
      }
    }
  }

  if (doc.contains("xi")) {
    cfg.xi = detail::get_number(doc, "xi");
    if (!(cfg.xi > 0.0 && cfg.xi <= 1.0)) invalid("xi", doc["xi"], "must lie in (0, 1]");
  }

  if (doc.contains("direction")) {
    for (const auto& s : detail::get_string_list(doc, "direction")) {
      try {
        cfg.directions.push_back(parse_direction(s));
      } catch (const DomainError&) {
        invalid("direction", doc["direction"], "entries must be up or down");
      }
    }
  } else {
    cfg.directions = {LinkDirection::kDown};
  }

  if (doc.contains("weather")) {
    cfg.weathers = detail::get_string_list(doc, "weather");
    for (const auto& w : cfg.weathers) weather_preset(w);
  } else {
    cfg.weathers = {"day1"};
  }

  auto& sc = cfg.scene;
  sc.L_bar = detail::get_positive(doc, "L_bar", false);
  sc.h_bar = detail::get_positive(doc, "h_bar", false);
  sc.lambda = detail::get_positive(doc, "lambda", false);
  sc.W0 = detail::get_positive(doc, "W0", false);
  sc.r_ap = detail::get_positive(doc, "r_ap", false);
  sc.alpha = detail::get_positive(doc, "alpha", true);
  sc.beta = detail::get_positive(doc, "beta", true);
  sc.cn2 = detail::get_positive(doc, "Cn2", true);
  sc.n0 = detail::get_positive(doc, "n0", true);
  if (doc.contains("pointing_model")) {
    const auto& v = doc["pointing_model"];
    if (!v.is_string()) invalid("pointing_model", v, "must be a string");
    try {
      sc.pointing_model = parse_pointing_model(v.get<std::string>());
    } catch (const DomainError&) {
      invalid("pointing_model", v,
              "must be off, alpha_L_squared, alpha_sq_L or literal_alpha_L");
    }
  }
  if (cfg.L_bar() <= sc.h_bar.value_or(20e3)) {
    invalid("L_bar", cfg.L_bar(), "must exceed h_bar");
  }

  if (doc.contains("zenith_grid")) {
    cfg.zenith_grid_deg = detail::get_number_list(doc, "zenith_grid");
    for (double z : cfg.zenith_grid_deg) {
      if (!(z >= 0.0 && z <= 80.0)) {
        invalid("zenith_grid", doc["zenith_grid"], "angles must lie in [0, 80] deg");
      }
    }
  } else if (cfg.sweep == SweepKind::kZenith) {
    cfg.zenith_grid_deg = detail::arange(0.0, 80.0, 2.0);
  } else {
    cfg.zenith_grid_deg = {0.0};
  }

  if (doc.contains("length_grid")) {
    cfg.length_grid_m = detail::get_number_list(doc, "length_grid");
  } else {
    cfg.length_grid_m = detail::arange(500e3, 2800e3, 100e3);
  }
  if (cfg.sweep == SweepKind::kLength) {
    for (double L : cfg.length_grid_m) {
      try {
        zenith_for_length(cfg.L_bar(), L);
      } catch (const DomainError&) {
        std::ostringstream c;
        c << "link lengths must lie in [L_bar, L_bar sec 80deg] = [" << cfg.L_bar()
          << ", " << cfg.L_bar() / std::cos(kMaxZenithRad) << "] m";
        invalid("length_grid", L, c.str());
      }
    }
  }

  if (doc.contains("n_samples")) {
    cfg.n_samples = detail::get_count(doc, "n_samples");
  } else {
    cfg.n_samples = cfg.sweep == SweepKind::kPdr ? 1000000 : 10000;
  }
  if (doc.contains("n_bins")) cfg.n_bins = detail::get_count(doc, "n_bins");

  if (doc.contains("rounding_decimals")) {
    const auto& v = doc["rounding_decimals"];
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 15) {
      invalid("rounding_decimals", v, "must be an integer in [0, 15]");
    }
    cfg.rounding_decimals = static_cast<int>(v.get<long long>());
  }

  if (doc.contains("seed")) {
    const auto& v = doc["seed"];
    if (!v.is_number_integer() ||
        (!v.is_number_unsigned() && v.get<long long>() < 0)) {
      invalid("seed", v, "must be a non-negative integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  } else if (stochastic) {
    throw DomainError("field 'seed' is required for the '" +
                      std::string(to_string(cfg.sweep)) +
                      "' sweep (no wall-clock default)");
  }

  if (doc.contains("bb84_qber_proxy")) {
    const auto& v = doc["bb84_qber_proxy"];
    if (!v.is_boolean()) invalid("bb84_qber_proxy", v, "must be true or false");
    cfg.bb84_qber_proxy = v.get<bool>();
  }

  if (doc.contains("output_path")) {
    const auto& v = doc["output_path"];
    if (!v.is_string()) invalid("output_path", v, "must be a string");
    cfg.output_path = v.get<std::string>();
  }
  if (doc.contains("format")) {
    const auto& v = doc["format"];
    if (!v.is_string() || (v != "csv" && v != "json")) {
      invalid("format", v, "must be csv or json");
    }
    cfg.format = v.get<std::string>();
  }

  // Resolve every scene once so invalid combinations fail before any work.
  for (auto dir : cfg.directions) {
    for (const auto& w : cfg.weathers) {
      cfg.make_scene(dir, w, cfg.zenith_grid_deg.front());
    }
  }
  return cfg;
}

/// Parses a JSON configuration document.
inline SimulationConfig parse_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("configuration is not valid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

}  // namespace hdqkd::sim

#endif  // HDQKD_SIM_CONFIG_HPP_
