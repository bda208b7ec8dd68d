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

#ifndef HDQKD_SIM_SWEEP_HPP_
#define HDQKD_SIM_SWEEP_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hdqkd/atmosphere.hpp"
#include "hdqkd/beam_transmit.hpp"
#include "hdqkd/errors.hpp"
#include "hdqkd/protocol.hpp"
#include "hdqkd/sim/config.hpp"

namespace hdqkd::sim {

/// One output row.
struct SweepRecord {
  std::string protocol;
  int d = 2;
  double q = 0.0;
  double xi = 1.0;
  std::string direction = "none";
  std::string weather = "none";
  double zenith_deg = 0.0;
  double L_m = 0.0;
  double mean_eta = 1.0;
  double avg_rate = 0.0;
  std::optional<double> qber;
  std::optional<double> tolerance;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Channel context shared by the distribution tables.
struct ScenePoint {
  std::string direction;
  std::string weather;
  double zenith_deg = 0.0;
  double L_m = 0.0;
};

struct PdtEntry {
  ScenePoint point;
  TransmittanceDistribution pdt;
};

struct PdrEntry {
  ScenePoint point;
  std::string protocol;
  int d = 2;
  double q = 0.0;
  double xi = 1.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  RateDistribution pdr;
};

struct SweepOutput {
  std::vector<SweepRecord> records;
  std::vector<PdtEntry> pdts;  // pdt sweeps only
  std::vector<PdrEntry> pdrs;  // pdr sweeps only
};

namespace detail {

template <class Fn>
auto annotate(const std::string& where, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw DomainError(where + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(where + ": " + e.what());
  }
}

inline std::string grid_point(const std::string& dir, const std::string& weather,
                              double zenith_deg) {
  std::ostringstream s;
  s << "grid point (direction=" << dir << ", weather=" << weather
    << ", zenith=" << zenith_deg << " deg)";
  return s.str();
}

}  // namespace detail

/// Evaluates the configured grid. Records are ordered by grid index:
/// channel sweeps nest direction, weather, zenith/length, protocol, d, q;
/// noise and tolerance sweeps nest protocol, d, q.
inline SweepOutput run_sweep(const SimulationConfig& cfg) {
  SweepOutput out;

  std::map<std::pair<Protocol, int>, double> tolerances;
  auto tolerance_for = [&](Protocol p, int d) {
    auto key = std::make_pair(p, d);
    auto it = tolerances.find(key);
    if (it != tolerances.end()) return it->second;
    std::ostringstream where;
    where << "tolerance (protocol=" << to_string(p) << ", d=" << d << ")";
    const double t = detail::annotate(where.str(), [&] {
      return protocol_noise_tolerance(p, d);
    });
    tolerances.emplace(key, t);
    return t;
  };
  auto qber_for = [&](Protocol p, int d, double q) -> std::optional<double> {
    if (p == Protocol::kBb84 && !cfg.bb84_qber_proxy) return std::nullopt;
    return protocol_qber(p, d, q);
  };

  if (cfg.sweep == SweepKind::kNoise) {
    for (Protocol p : cfg.protocols) {
      for (int d : cfg.d_list) {
        for (double q : cfg.q_list) {
          SweepRecord r;
          r.protocol = std::string(to_string(p));
          r.d = d;
          r.q = q;
          r.xi = cfg.xi;
          r.avg_rate = protocol_key_rate(p, d, q, cfg.xi);
          r.qber = qber_for(p, d, q);
          r.tolerance = tolerance_for(p, d);
          r.seed = cfg.seed;
          out.records.push_back(std::move(r));
        }
      }
    }
    return out;
  }

  if (cfg.sweep == SweepKind::kTolerance) {
    for (Protocol p : cfg.protocols) {
      for (int d : cfg.d_list) {
        const double t = tolerance_for(p, d);
        SweepRecord r;
        r.protocol = std::string(to_string(p));
        r.d = d;
        r.q = t;
        r.xi = cfg.xi;
        r.avg_rate = protocol_key_rate(p, d, t, cfg.xi);
        r.qber = qber_for(p, d, t);
        r.tolerance = t;
        r.seed = cfg.seed;
        out.records.push_back(std::move(r));
      }
    }
    return out;
  }

  // Channel sweeps: one PDT per (direction, weather, zenith), shared by every
  // protocol/d/q at that point.
  std::vector<double> zenith_grid;
  if (cfg.sweep == SweepKind::kLength) {
    for (double L : cfg.length_grid_m) {
      zenith_grid.push_back(rad_to_deg(zenith_for_length(cfg.L_bar(), L)));
    }
  } else {
    zenith_grid = cfg.zenith_grid_deg;
  }

  for (LinkDirection dir : cfg.directions) {
    const std::string dir_name(to_string(dir));
    for (const std::string& weather : cfg.weathers) {
      const std::string weather_name = cfg.weather_label(weather);
      for (std::size_t zi = 0; zi < zenith_grid.size(); ++zi) {
        const double zenith_deg = zenith_grid[zi];
        const std::string where = detail::grid_point(dir_name, weather_name, zenith_deg);
        const ChannelScene scene = detail::annotate(
            where, [&] { return cfg.make_scene(dir, weather, zenith_deg); });
        const double L = cfg.sweep == SweepKind::kLength
                             ? cfg.length_grid_m[zi]
                             : link_geometry(scene.L_bar, scene.h_bar, scene.zenith).L;
        const ScenePoint point{dir_name, weather_name, zenith_deg, L};

        const std::vector<double> etas = detail::annotate(
            where, [&] { return sample_transmittances(scene, cfg.n_samples, cfg.seed); });
        TransmittanceDistribution pdt = bin_transmittances(etas, cfg.n_bins);
        pdt.seed = cfg.seed;
        pdt.chi_ext = extinction_factor(scene.zenith, scene.beta);
        if (cfg.sweep == SweepKind::kPdt) out.pdts.push_back({point, pdt});

        for (Protocol p : cfg.protocols) {
          for (int d : cfg.d_list) {
            for (double q : cfg.q_list) {
              const double rate = protocol_key_rate(p, d, q, cfg.xi);
              SweepRecord r;
              r.protocol = std::string(to_string(p));
              r.d = d;
              r.q = q;
              r.xi = cfg.xi;
              r.direction = dir_name;
              r.weather = weather_name;
              r.zenith_deg = zenith_deg;
              r.L_m = L;
              r.mean_eta = pdt.mean_eta;
              r.avg_rate = average_key_rate(pdt, rate);
              r.qber = qber_for(p, d, q);
              r.n_samples = cfg.n_samples;
              r.seed = cfg.seed;
              out.records.push_back(std::move(r));

              if (cfg.sweep == SweepKind::kPdr) {
                const int decimals =
                    cfg.rounding_decimals.value_or(default_rounding_decimals(p));
                out.pdrs.push_back({point, std::string(to_string(p)), d, q, cfg.xi,
                                    cfg.n_samples, cfg.seed,
                                    rate_distribution(etas, rate, decimals)});
              }
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace hdqkd::sim

#endif  // HDQKD_SIM_SWEEP_HPP_
