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

#include <cmath>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "hdqkd/sim/config.hpp"
#include "hdqkd/sim/emit.hpp"
#include "hdqkd/sim/sweep.hpp"

namespace hdqkd::sim {
namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const DomainError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, MinimalConfigGetsDefaults) {
  const auto cfg = parse_config(R"({"protocol": "bb84", "sweep": "noise"})");
  ASSERT_EQ(cfg.protocols.size(), 1u);
  EXPECT_EQ(cfg.protocols[0], Protocol::kBb84);
  EXPECT_EQ(cfg.d_list, (std::vector<int>{2, 4, 8, 16, 32}));
  ASSERT_EQ(cfg.q_list.size(), 71u);
  EXPECT_DOUBLE_EQ(cfg.q_list.front(), 0.0);
  EXPECT_NEAR(cfg.q_list.back(), 0.35, 1e-12);
  EXPECT_DOUBLE_EQ(cfg.xi, 1.0);
  EXPECT_EQ(cfg.format, "csv");
  EXPECT_EQ(cfg.n_bins, 100u);
}

TEST(Config, StochasticDefaults) {
  const auto cfg = parse_config(R"({"sweep": "pdr", "seed": 3})");
  EXPECT_EQ(cfg.d_list, (std::vector<int>{32}));
  EXPECT_EQ(cfg.n_samples, 1000000u);
  EXPECT_EQ(cfg.directions, (std::vector<LinkDirection>{LinkDirection::kDown}));
  EXPECT_EQ(cfg.weathers, (std::vector<std::string>{"day1"}));
  EXPECT_EQ(cfg.seed, 3u);
}

TEST(Config, PresetScene) {
  const auto cfg = parse_config(R"({"sweep": "zenith", "seed": 1})");
  const auto s = cfg.make_scene(LinkDirection::kDown, "day1", 0.0);
  EXPECT_DOUBLE_EQ(s.cn2, 1.64e-16);
  EXPECT_DOUBLE_EQ(s.n0, 0.01);
  EXPECT_DOUBLE_EQ(s.W0, 0.15);
  EXPECT_DOUBLE_EQ(s.r_ap, 0.5);
  EXPECT_EQ(cfg.weather_label("day1"), "day1");
}

TEST(Config, OverriddenTurbulenceIsLabelledCustom) {
  const auto cfg = parse_config(R"({"sweep": "zenith", "seed": 1, "Cn2": 1e-15})");
  EXPECT_EQ(cfg.weather_label("day1"), "custom");
  EXPECT_DOUBLE_EQ(cfg.make_scene(LinkDirection::kUp, "day1", 10.0).cn2, 1e-15);
}

TEST(Config, NoiseAboveBoundIsRejected) {
  const std::string msg = error_of(R"({"d_list": [2], "q_list": [0.6]})");
  EXPECT_NE(msg.find("q_list"), std::string::npos) << msg;
  EXPECT_NE(msg.find("0.5"), std::string::npos) << msg;
  EXPECT_NE(msg.find("(d-1)/d"), std::string::npos) << msg;
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_NE(error_of(R"({"q_list": []})").find("q_list"), std::string::npos);
  EXPECT_NE(error_of(R"({"bogus": 1})").find("bogus"), std::string::npos);
  EXPECT_NE(error_of(R"({"sweep": "pdt"})").find("seed"), std::string::npos);
  EXPECT_NE(error_of(R"({"d_list": [1]})").find("d_list"), std::string::npos);
  EXPECT_NE(error_of(R"({"xi": 0})").find("xi"), std::string::npos);
  EXPECT_NE(error_of(R"({"protocol": "e91"})").find("protocol"), std::string::npos);
  EXPECT_NE(error_of(R"({"sweep": "zenith", "seed": 1, "zenith_grid": [85]})")
                .find("zenith"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"sweep": "pdt", "seed": 1, "weather": "fog"})").find("day1"),
            std::string::npos);
  EXPECT_NE(error_of("{not json").size(), 0u);
  EXPECT_NE(error_of("[1, 2]").size(), 0u);
}

TEST(Sweep, NoiseSweepBb84) {
  const auto out = run_sweep(
      parse_config(R"({"protocol": "bb84", "d_list": [32], "q_list": [0, 0.33]})"));
  ASSERT_EQ(out.records.size(), 2u);
  EXPECT_NEAR(out.records[0].avg_rate, 5.0, 1e-12);
  EXPECT_DOUBLE_EQ(out.records[1].avg_rate, 0.0);
  EXPECT_EQ(out.records[0].protocol, "bb84");
  EXPECT_EQ(out.records[0].direction, "none");
  ASSERT_TRUE(out.records[0].tolerance.has_value());
  EXPECT_NEAR(*out.records[0].tolerance, 0.3217, 0.002);
}

TEST(Sweep, RecordCountIsGridProduct) {
  const auto noise = run_sweep(parse_config(R"({"d_list": [2, 4, 8], "q_list": [0, 0.01]})"));
  EXPECT_EQ(noise.records.size(), 2u * 3u * 2u);

  const auto zenith = run_sweep(parse_config(
      R"({"sweep": "zenith", "seed": 2, "n_samples": 50, "d_list": [2, 32],
          "direction": ["up", "down"], "weather": ["day1", "night3"],
          "zenith_grid": [0, 30, 60]})"));
  EXPECT_EQ(zenith.records.size(), 2u * 2u * 3u * 2u * 2u);
}

TEST(Sweep, ToleranceSweepAndQberProxy) {
  const auto out = run_sweep(parse_config(
      R"({"sweep": "tolerance", "d_list": [2], "bb84_qber_proxy": false})"));
  ASSERT_EQ(out.records.size(), 2u);
  for (const auto& r : out.records) {
    ASSERT_TRUE(r.tolerance.has_value());
    EXPECT_DOUBLE_EQ(r.q, *r.tolerance);
    EXPECT_NEAR(r.avg_rate, 0.0, 1e-8);
  }
  EXPECT_TRUE(out.records[0].qber.has_value());   // ext_b92
  EXPECT_FALSE(out.records[1].qber.has_value());  // bb84 with proxy off
}

TEST(Sweep, LengthSweepReproducesRequestedLengths) {
  const auto out = run_sweep(parse_config(
      R"({"sweep": "length", "seed": 4, "n_samples": 20, "protocol": "bb84",
          "d_list": [2], "length_grid": [500000, 1500000]})"));
  ASSERT_EQ(out.records.size(), 2u);
  EXPECT_NEAR(out.records[0].L_m, 500000.0, 1e-6);
  EXPECT_NEAR(out.records[1].L_m, 1500000.0, 1e-3);
  EXPECT_NEAR(out.records[0].zenith_deg, 0.0, 1e-9);
}

TEST(Sweep, ZenithSweepRateDecreases) {
  const auto out = run_sweep(parse_config(
      R"({"sweep": "zenith", "seed": 8, "n_samples": 2000, "protocol": "bb84",
          "d_list": [32], "zenith_grid": [0, 20, 40, 60, 80]})"));
  for (std::size_t i = 1; i < out.records.size(); ++i) {
    EXPECT_LT(out.records[i].avg_rate, out.records[i - 1].avg_rate);
  }
}

TEST(Sweep, DistributionTables) {
  const auto pdt = run_sweep(parse_config(
      R"({"sweep": "pdt", "seed": 1, "n_samples": 100, "n_bins": 10,
          "direction": ["up", "down"]})"));
  ASSERT_EQ(pdt.pdts.size(), 2u);
  EXPECT_EQ(pdt.pdts[0].pdt.probabilities.size(), 10u);

  const auto pdr = run_sweep(parse_config(
      R"({"sweep": "pdr", "seed": 1, "n_samples": 100, "q_list": [0, 0.02]})"));
  EXPECT_EQ(pdr.pdrs.size(), 2u * 2u);
  EXPECT_EQ(pdr.pdrs[0].pdr.rounding_decimals, 6);
  EXPECT_EQ(pdr.pdrs[2].pdr.rounding_decimals, 5);
}

TEST(Emit, SingleRecordCsv) {
  const auto out = run_sweep(parse_config(R"({"protocol": "bb84", "d_list": [2], "q_list": [0]})"));
  const std::string csv = records_to_csv(out.records);
  std::istringstream in(csv);
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, kRecordCsvHeader);
  EXPECT_FALSE(std::getline(in, extra));
  EXPECT_EQ(row.rfind("bb84,2,0,1,none,none,", 0), 0u) << row;
}

TEST(Emit, CsvAndJsonAgree) {
  const auto out = run_sweep(parse_config(
      R"({"sweep": "zenith", "seed": 5, "n_samples": 40, "d_list": [4],
          "zenith_grid": [0, 45], "bb84_qber_proxy": false})"));
  const std::string csv = records_to_csv(out.records);
  const auto json = records_to_json(out.records);
  ASSERT_EQ(json.size(), out.records.size());

  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> names;
  {
    std::istringstream h(line);
    std::string f;
    while (std::getline(h, f, ',')) names.push_back(f);
  }
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    std::getline(in, line);
    std::vector<std::string> fields;
    std::istringstream r(line);
    std::string f;
    while (std::getline(r, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    ASSERT_EQ(fields.size(), names.size()) << line;
    for (std::size_t k = 0; k < names.size(); ++k) {
      const auto& v = json[i].at(names[k]);
      if (v.is_null()) {
        EXPECT_EQ(fields[k], "") << names[k];
      } else if (v.is_string()) {
        EXPECT_EQ(fields[k], v.get<std::string>()) << names[k];
      } else {
        EXPECT_EQ(std::stod(fields[k]), v.get<double>()) << names[k];
      }
    }
  }
}

TEST(Emit, RepeatedRunsAreByteIdentical) {
  const std::string text =
      R"({"sweep": "pdr", "seed": 99, "n_samples": 500, "direction": "up"})";
  const auto a = run_sweep(parse_config(text));
  const auto b = run_sweep(parse_config(text));
  EXPECT_EQ(pdr_to_csv(a.pdrs), pdr_to_csv(b.pdrs));
  EXPECT_EQ(records_to_csv(a.records), records_to_csv(b.records));
  EXPECT_EQ(pdr_to_json(a.pdrs).dump(), pdr_to_json(b.pdrs).dump());
}

TEST(Emit, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, 0.0, -2.5e-300}) {
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
}

}  // namespace
}  // namespace hdqkd::sim
