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

// Batch front-end: hdqkd_sim {sweep,pdt,pdr,tolerance,presets}.
//
// Every subcommand except `presets` reads an optional JSON config file and
// applies `--key value` overrides on top of it (flags win). List-valued keys
// take comma-separated values, e.g. `--d_list 2,8,32`.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hdqkd/atmosphere.hpp"
#include "hdqkd/errors.hpp"
#include "hdqkd/sim/config.hpp"
#include "hdqkd/sim/emit.hpp"
#include "hdqkd/sim/sweep.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

enum class ValueKind { kString, kNumber, kInteger, kBool, kNumberList, kIntegerList, kStringList };

const std::map<std::string, ValueKind>& override_keys() {
  static const std::map<std::string, ValueKind> keys{
      {"protocol", ValueKind::kString},       {"sweep", ValueKind::kString},
      {"d_list", ValueKind::kIntegerList},    {"q_list", ValueKind::kNumberList},
      {"xi", ValueKind::kNumber},             {"direction", ValueKind::kStringList},
      {"weather", ValueKind::kStringList},    {"zenith_grid", ValueKind::kNumberList},
      {"length_grid", ValueKind::kNumberList}, {"n_samples", ValueKind::kInteger},
      {"n_bins", ValueKind::kInteger},        {"rounding_decimals", ValueKind::kInteger},
      {"seed", ValueKind::kInteger},          {"output_path", ValueKind::kString},
      {"format", ValueKind::kString},         {"L_bar", ValueKind::kNumber},
      {"h_bar", ValueKind::kNumber},          {"lambda", ValueKind::kNumber},
      {"W0", ValueKind::kNumber},             {"r_ap", ValueKind::kNumber},
      {"alpha", ValueKind::kNumber},          {"beta", ValueKind::kNumber},
      {"Cn2", ValueKind::kNumber},            {"n0", ValueKind::kNumber},
      {"pointing_model", ValueKind::kString}, {"bb84_qber_proxy", ValueKind::kBool},
  };
  return keys;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

double to_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw hdqkd::DomainError("flag --" + key + ": '" + text + "' is not a number");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw hdqkd::DomainError("flag --" + key + ": '" + text + "' is not an integer");
  }
  return v;
}

json override_value(const std::string& key, ValueKind kind, const std::string& text) {
  switch (kind) {
    case ValueKind::kString:
      return text;
    case ValueKind::kNumber:
      return to_number(key, text);
    case ValueKind::kInteger: {
      if (key == "seed" && !text.empty() && text[0] != '-') {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
          v = std::stoull(text, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != text.size()) {
          throw hdqkd::DomainError("flag --seed: '" + text + "' is not an integer");
        }
        return v;
      }
      return to_integer(key, text);
    }
    case ValueKind::kBool:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw hdqkd::DomainError("flag --" + key + ": '" + text + "' is not true/false");
    case ValueKind::kNumberList: {
      json arr = json::array();
      for (const auto& item : split(text)) arr.push_back(to_number(key, item));
      return arr;
    }
    case ValueKind::kIntegerList: {
      json arr = json::array();
      for (const auto& item : split(text)) arr.push_back(to_integer(key, item));
      return arr;
    }
    case ValueKind::kStringList: {
      json arr = json::array();
      for (const auto& item : split(text)) arr.push_back(item);
      return arr;
    }
  }
  return text;
}

struct SubcommandArgs {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

void add_config_options(CLI::App* sub, SubcommandArgs& args) {
  sub->add_option("--config", args.config_path, "JSON configuration file");
  for (const auto& [key, kind] : override_keys()) {
    sub->add_option_function<std::string>(
        "--" + key, [&args, k = key](const std::string& v) { args.overrides[k] = v; },
        "override config key '" + key + "'");
  }
}

hdqkd::sim::SimulationConfig load_config(const SubcommandArgs& args,
                                         const char* forced_sweep) {
  json doc = json::object();
  if (!args.config_path.empty()) {
    std::ifstream f(args.config_path);
    if (!f) throw hdqkd::IoError("cannot read config file '" + args.config_path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    try {
      doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
      throw hdqkd::DomainError("config file '" + args.config_path +
                               "' is not valid JSON: " + e.what());
    }
  }
  for (const auto& [key, text] : args.overrides) {
    doc[key] = override_value(key, override_keys().at(key), text);
  }
  if (forced_sweep != nullptr) doc["sweep"] = forced_sweep;
  return hdqkd::sim::config_from_json(doc);
}

int run(const SubcommandArgs& args, const char* forced_sweep) {
  const auto cfg = load_config(args, forced_sweep);
  const auto out = hdqkd::sim::run_sweep(cfg);
  hdqkd::sim::emit_output(out, cfg.sweep, cfg.format, cfg.output_path);
  return kExitOk;
}

void print_presets() {
  std::cout << "name,Cn2,n0\n";
  for (const auto& p : hdqkd::kWeatherPresets) {
    std::cout << p.name << ',' << hdqkd::sim::format_number(p.cn2) << ','
              << hdqkd::sim::format_number(p.n0) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-dimensional QKD satellite-link simulator"};
  app.require_subcommand(1);

  SubcommandArgs sweep_args, pdt_args, pdr_args, tol_args;
  auto* sweep = app.add_subcommand("sweep", "evaluate the configured sweep grid");
  add_config_options(sweep, sweep_args);
  auto* pdt = app.add_subcommand("pdt", "transmittance distributions");
  add_config_options(pdt, pdt_args);
  auto* pdr = app.add_subcommand("pdr", "key-rate distributions");
  add_config_options(pdr, pdr_args);
  auto* tol = app.add_subcommand("tolerance", "noise tolerance per protocol and dimension");
  add_config_options(tol, tol_args);
  auto* presets = app.add_subcommand("presets", "list weather presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*sweep) return run(sweep_args, nullptr);
    if (*pdt) return run(pdt_args, "pdt");
    if (*pdr) return run(pdr_args, "pdr");
    if (*tol) return run(tol_args, "tolerance");
    if (*presets) {
      print_presets();
      return kExitOk;
    }
  } catch (const hdqkd::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const hdqkd::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const hdqkd::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}
