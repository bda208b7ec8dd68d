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

#ifndef HDQKD_SIM_EMIT_HPP_
#define HDQKD_SIM_EMIT_HPP_

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hdqkd/errors.hpp"
#include "hdqkd/sim/sweep.hpp"
#include "json.hpp"

namespace hdqkd::sim {

inline constexpr const char* kRecordCsvHeader =
    "protocol,d,q,xi,direction,weather,zenith_deg,L_m,mean_eta,avg_rate,qber,"
    "tolerance,n_samples,seed";

// %.17g round-trips every double.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_optional(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string();
}

inline std::string records_to_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  out << kRecordCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.protocol << ',' << r.d << ',' << format_number(r.q) << ','
        << format_number(r.xi) << ',' << r.direction << ',' << r.weather << ','
        << format_number(r.zenith_deg) << ',' << format_number(r.L_m) << ','
        << format_number(r.mean_eta) << ',' << format_number(r.avg_rate) << ','
        << format_optional(r.qber) << ',' << format_optional(r.tolerance) << ','
        << r.n_samples << ',' << r.seed << '\n';
  }
  return out.str();
}

inline nlohmann::json optional_json(const std::optional<double>& x) {
  return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

inline nlohmann::json records_to_json(const std::vector<SweepRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["protocol"] = r.protocol;
    j["d"] = r.d;
    j["q"] = r.q;
    j["xi"] = r.xi;
    j["direction"] = r.direction;
    j["weather"] = r.weather;
    j["zenith_deg"] = r.zenith_deg;
    j["L_m"] = r.L_m;
    j["mean_eta"] = r.mean_eta;
    j["avg_rate"] = r.avg_rate;
    j["qber"] = optional_json(r.qber);
    j["tolerance"] = optional_json(r.tolerance);
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline std::string pdt_to_csv(const std::vector<PdtEntry>& entries) {
  std::ostringstream out;
  out << "direction,weather,zenith_deg,L_m,n_samples,seed,chi_ext,mean_eta,"
         "bin_center,bin_mean,probability\n";
  for (const auto& e : entries) {
    for (std::size_t i = 0; i < e.pdt.bin_centers.size(); ++i) {
      out << e.point.direction << ',' << e.point.weather << ','
          << format_number(e.point.zenith_deg) << ','
          << format_number(e.point.L_m) << ',' << e.pdt.n_samples << ','
          << e.pdt.seed << ',' << format_number(e.pdt.chi_ext) << ','
          << format_number(e.pdt.mean_eta) << ','
          << format_number(e.pdt.bin_centers[i]) << ','
          << format_number(e.pdt.bin_means[i]) << ','
          << format_number(e.pdt.probabilities[i]) << '\n';
    }
  }
  return out.str();
}

inline nlohmann::json pdt_to_json(const std::vector<PdtEntry>& entries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    arr.push_back({{"direction", e.point.direction},
                   {"weather", e.point.weather},
                   {"zenith_deg", e.point.zenith_deg},
                   {"L_m", e.point.L_m},
                   {"n_samples", e.pdt.n_samples},
                   {"n_bins", e.pdt.n_bins},
                   {"seed", e.pdt.seed},
                   {"chi_ext", e.pdt.chi_ext},
                   {"mean_eta", e.pdt.mean_eta},
                   {"bin_centers", e.pdt.bin_centers},
                   {"bin_means", e.pdt.bin_means},
                   {"probabilities", e.pdt.probabilities}});
  }
  return arr;
}

inline std::string pdr_to_csv(const std::vector<PdrEntry>& entries) {
  std::ostringstream out;
  out << "protocol,d,q,xi,direction,weather,zenith_deg,L_m,n_samples,seed,"
         "rounding_decimals,rate,probability\n";
  for (const auto& e : entries) {
    for (std::size_t i = 0; i < e.pdr.rate_values.size(); ++i) {
      out << e.protocol << ',' << e.d << ',' << format_number(e.q) << ','
          << format_number(e.xi) << ',' << e.point.direction << ','
          << e.point.weather << ',' << format_number(e.point.zenith_deg) << ','
          << format_number(e.point.L_m) << ',' << e.n_samples << ',' << e.seed
          << ',' << e.pdr.rounding_decimals << ','
          << format_number(e.pdr.rate_values[i]) << ','
          << format_number(e.pdr.probabilities[i]) << '\n';
    }
  }
  return out.str();
}

inline nlohmann::json pdr_to_json(const std::vector<PdrEntry>& entries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    arr.push_back({{"protocol", e.protocol},
                   {"d", e.d},
                   {"q", e.q},
                   {"xi", e.xi},
                   {"direction", e.point.direction},
                   {"weather", e.point.weather},
                   {"zenith_deg", e.point.zenith_deg},
                   {"L_m", e.point.L_m},
                   {"n_samples", e.n_samples},
                   {"seed", e.seed},
                   {"rounding_decimals", e.pdr.rounding_decimals},
                   {"rate_values", e.pdr.rate_values},
                   {"probabilities", e.pdr.probabilities}});
  }
  return arr;
}

/// Writes `content` to `path`, or to stdout when path is empty or "-".
inline void write_output(const std::string& content, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file '" + path + "' for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing output file '" + path + "'");
}

inline std::string render_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline void emit_records(const std::vector<SweepRecord>& records,
                         const std::string& format, const std::string& path) {
  if (format == "json") {
    write_output(render_json(records_to_json(records)), path);
  } else if (format == "csv") {
    write_output(records_to_csv(records), path);
  } else {
    throw DomainError("output format '" + format + "' must be csv or json");
  }
}

/// Emits the primary artifact of a sweep: distribution tables for pdt/pdr
/// sweeps, records otherwise.
inline void emit_output(const SweepOutput& out, SweepKind kind,
                        const std::string& format, const std::string& path) {
  const bool json = format == "json";
  if (!json && format != "csv") {
    throw DomainError("output format '" + format + "' must be csv or json");
  }
  switch (kind) {
    case SweepKind::kPdt:
      write_output(json ? render_json(pdt_to_json(out.pdts)) : pdt_to_csv(out.pdts), path);
      return;
    case SweepKind::kPdr:
      write_output(json ? render_json(pdr_to_json(out.pdrs)) : pdr_to_csv(out.pdrs), path);
      return;
    default:
      emit_records(out.records, format, path);
  }
}

}  // namespace hdqkd::sim

#endif  // HDQKD_SIM_EMIT_HPP_
