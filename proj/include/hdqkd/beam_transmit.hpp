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

#ifndef HDQKD_BEAM_TRANSMIT_HPP_
#define HDQKD_BEAM_TRANSMIT_HPP_

// Aperture transmittance of an elliptic Gaussian beam, Monte Carlo
// transmittance distributions (PDT), averaged key rates and key-rate
// distributions (PDR).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "hdqkd/atmosphere.hpp"
#include "hdqkd/errors.hpp"
#include "hdqkd/protocol.hpp"
#include "hdqkd/quadrature.hpp"
#include "hdqkd/rng.hpp"

namespace hdqkd {

struct QuadratureEstimate {
  double value = 0.0;
  double error = 0.0;  // |I_k - I_{k-1}| at the accepted level
  std::size_t radial_nodes = 0;
};

namespace detail {

// Radial rule size per refinement level; the angular rule is twice as fine.
inline constexpr std::array<std::size_t, 8> kRuleSizes{16,  32,  64,   128,
                                                        256, 512, 1024, 2048};
inline constexpr double kQuadratureRelTol = 1e-6;
inline constexpr double kQuadratureAbsTol = 1e-14;

inline const std::vector<quadrature::GaussLegendreRule>& rule_table() {
  static const std::vector<quadrature::GaussLegendreRule> table = [] {
    std::vector<quadrature::GaussLegendreRule> t;
    for (std::size_t n : kRuleSizes) t.push_back(quadrature::gauss_legendre(n));
    return t;
  }();
  return table;
}

// Fraction of the beam power inside the aperture (before extinction) using
// rule `level` radially and `level + 1` angularly.
inline double aperture_integral(const BeamVector& beam, double r_ap,
                                std::size_t level) {
  const auto& radial = rule_table()[level];
  const auto& angular = rule_table()[level + 1];
  const double rho0 = beam.rho0();
  const double c = std::cos(beam.phi_rel);
  const double s = std::sin(beam.phi_rel);
  const double inv1 = 1.0 / (beam.W1 * beam.W1);
  const double inv2 = 1.0 / (beam.W2 * beam.W2);
  const double a1 = c * c * inv1 + s * s * inv2;
  const double a2 = s * s * inv1 + c * c * inv2;
  const double a3 = (inv1 - inv2) * std::sin(2.0 * beam.phi_rel);

  thread_local std::vector<double> cos_t;
  thread_local std::vector<double> sin_t;
  cos_t.resize(angular.size());
  sin_t.resize(angular.size());
  for (std::size_t j = 0; j < angular.size(); ++j) {
    const double theta = std::numbers::pi * (angular.nodes[j] + 1.0);
    cos_t[j] = std::cos(theta);
    sin_t[j] = std::sin(theta);
  }

  double total = 0.0;
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double rho = 0.5 * r_ap * (radial.nodes[i] + 1.0);
    double ring = 0.0;
    for (std::size_t j = 0; j < angular.size(); ++j) {
      const double dx = rho * cos_t[j] - rho0;
      const double y = rho * sin_t[j];
      ring += angular.weights[j] *
              std::exp(-2.0 * (a1 * dx * dx + a2 * y * y + a3 * dx * y));
    }
    total += radial.weights[i] * rho * ring;
  }
  // Jacobians: rho in [0, r] -> r/2, theta in [0, 2 pi] -> pi.
  total *= 0.5 * r_ap * std::numbers::pi;
  return 2.0 / (std::numbers::pi * beam.W1 * beam.W2) * total;
}

}  // namespace detail

/// Captured power fraction of `beam` through a centred circular aperture of
/// radius r_ap, by tensor Gauss-Legendre quadrature in (rho, theta) refined
/// until successive levels agree to 1e-6 relative.
inline QuadratureEstimate integrate_aperture(const BeamVector& beam,
                                             double r_ap) {
  if (!(r_ap > 0.0)) throw DomainError("aperture radius must be > 0");
  if (!(beam.W1 > 0.0) || !(beam.W2 > 0.0) || !std::isfinite(beam.W1) ||
      !std::isfinite(beam.W2)) {
    std::ostringstream msg;
    msg << "beam semi-axes must be positive and finite (W1 = " << beam.W1
        << ", W2 = " << beam.W2 << ")";
    throw DomainError(msg.str());
  }
  double previous = detail::aperture_integral(beam, r_ap, 0);
  QuadratureEstimate est;
  for (std::size_t level = 1; level + 1 < detail::kRuleSizes.size(); ++level) {
    const double current = detail::aperture_integral(beam, r_ap, level);
    est.value = current;
    est.error = std::abs(current - previous);
    est.radial_nodes = detail::kRuleSizes[level];
    if (est.error <= detail::kQuadratureRelTol * std::abs(current) +
                         detail::kQuadratureAbsTol) {
      return est;
    }
    previous = current;
  }
  std::ostringstream msg;
  msg.precision(10);
  msg << "aperture quadrature did not converge: estimate " << est.value
      << ", error bound " << est.error << " (W1 = " << beam.W1
      << ", W2 = " << beam.W2 << ", rho0 = " << beam.rho0()
      << ", r = " << r_ap << ")";
  throw NumericError(msg.str());
}

/// eta = chi_ext * (captured power fraction), clamped to [0, chi_ext].
inline double aperture_transmittance(const BeamVector& beam, double r_ap,
                                     double chi_ext) {
  if (!(chi_ext > 0.0 && chi_ext <= 1.0)) {
    throw DomainError("extinction transmissivity must lie in (0, 1]");
  }
  const double captured = integrate_aperture(beam, r_ap).value;
  return std::clamp(chi_ext * captured, 0.0, chi_ext);
}

namespace detail {

// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads over
// contiguous chunks. Results must go to index-addressed storage. Of the
// failures, the one from the earliest chunk is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, (n + 255) / 256);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      for (std::size_t i = begin; i < end; ++i) {
        try {
          fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (std::size_t w = 0; w < workers; ++w) {
    if (errors[w]) std::rethrow_exception(errors[w]);
  }
}

template <class E>
[[noreturn]] void rethrow_with_index(const E& e, std::size_t index) {
  std::ostringstream msg;
  msg << "sample " << index << ": " << e.what();
  throw E(msg.str());
}

}  // namespace detail

/// Draws n beams for `scene` and returns eta for each, including extinction.
/// Sample i uses the stream sample_stream(seed, i), so the result does not
/// depend on the number of threads.
inline std::vector<double> sample_transmittances(const ChannelScene& scene,
                                                 std::size_t n_samples,
                                                 std::uint64_t seed) {
  if (n_samples < 1) throw DomainError("n_samples must be >= 1");
  scene.validate();
  const BeamMoments moments = beam_moments(scene);
  const ThetaLawParams law = theta_law(moments);
  const double chi = extinction_factor(scene.zenith, scene.beta);
  std::vector<double> etas(n_samples);
  detail::parallel_for(n_samples, [&](std::size_t i) {
    auto rng = sample_stream(seed, i);
    const BeamVector beam = sample_beam_vector(law, moments.var_centroid, rng);
    try {
      etas[i] = aperture_transmittance(beam, scene.r_ap, chi);
    } catch (const NumericError& e) {
      detail::rethrow_with_index(e, i);
    } catch (const DomainError& e) {
      detail::rethrow_with_index(e, i);
    }
  });
  return etas;
}

struct TransmittanceDistribution {
  std::vector<double> bin_centers;  // midpoints of the equal-width bins
  // Mean eta of the samples in each bin (the midpoint for empty bins). Used
  // as the representative transmittance when averaging rates, so that a
  // channel whose whole sample sits in one bin is not rounded to the
  // midpoint of that bin. May be left empty, in which case midpoints are used.
  std::vector<double> bin_means;
  std::vector<double> probabilities;
  std::size_t n_samples = 0;
  std::size_t n_bins = 0;
  std::uint64_t seed = 0;
  double chi_ext = 1.0;
  double mean_eta = 0.0;  // sample mean, not the binned mean
};

/// Equal-width histogram of eta values on [0, 1].
inline TransmittanceDistribution bin_transmittances(
    const std::vector<double>& etas, std::size_t n_bins) {
  if (n_bins < 1) throw DomainError("n_bins must be >= 1");
  if (etas.empty()) throw DomainError("cannot bin an empty sample");
  std::vector<std::uint64_t> counts(n_bins, 0);
  std::vector<double> sums(n_bins, 0.0);
  double sum = 0.0;
  for (double eta : etas) {
    const double clamped = std::clamp(eta, 0.0, 1.0);
    const auto bin = std::min<std::size_t>(
        n_bins - 1, static_cast<std::size_t>(clamped * n_bins));
    ++counts[bin];
    sums[bin] += clamped;
    sum += eta;
  }
  TransmittanceDistribution pdt;
  pdt.n_bins = n_bins;
  pdt.n_samples = etas.size();
  pdt.mean_eta = sum / etas.size();
  pdt.bin_centers.resize(n_bins);
  pdt.bin_means.resize(n_bins);
  pdt.probabilities.resize(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) {
    pdt.bin_centers[i] = (i + 0.5) / n_bins;
    pdt.bin_means[i] = counts[i] ? sums[i] / static_cast<double>(counts[i])
                                 : pdt.bin_centers[i];
    pdt.probabilities[i] =
        static_cast<double>(counts[i]) / static_cast<double>(etas.size());
  }
  return pdt;
}

inline TransmittanceDistribution estimate_pdt(const ChannelScene& scene,
                                              std::size_t n_samples,
                                              std::size_t n_bins,
                                              std::uint64_t seed) {
  if (n_bins < 1) throw DomainError("n_bins must be >= 1");
  TransmittanceDistribution pdt =
      bin_transmittances(sample_transmittances(scene, n_samples, seed), n_bins);
  pdt.seed = seed;
  pdt.chi_ext = extinction_factor(scene.zenith, scene.beta);
  return pdt;
}

/// sum_i R(eta_i) P(eta_i) with R(eta) = eta * protocol_rate, where eta_i
/// is the bin mean when available.
inline double average_key_rate(const TransmittanceDistribution& pdt,
                               double protocol_rate) {
  const auto& eta = pdt.bin_means.empty() ? pdt.bin_centers : pdt.bin_means;
  if (eta.size() != pdt.probabilities.size()) {
    throw DomainError("PDT has mismatched bin and probability counts");
  }
  double avg = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    avg += eta[i] * protocol_rate * pdt.probabilities[i];
  }
  return avg;
}

inline double average_key_rate(const TransmittanceDistribution& pdt,
                               Protocol protocol, int d, double q,
                               double xi = 1.0) {
  return average_key_rate(pdt, protocol_key_rate(protocol, d, q, xi));
}

struct RateDistribution {
  std::vector<double> rate_values;  // ascending
  std::vector<double> probabilities;
  int rounding_decimals = 6;
};

/// Default rounding for PDR tables: 6 decimals for Ext-B92, 5 for BB84.
inline int default_rounding_decimals(Protocol p) {
  return p == Protocol::kExtB92 ? 6 : 5;
}

/// Frequencies of eta_i * rate rounded to `decimals` places.
inline RateDistribution rate_distribution(const std::vector<double>& etas,
                                          double protocol_rate, int decimals) {
  if (decimals < 0 || decimals > 15) {
    throw DomainError("rounding_decimals must lie in [0, 15]");
  }
  if (etas.empty()) throw DomainError("cannot build a PDR from zero samples");
  const double scale = std::pow(10.0, decimals);
  std::map<long long, std::uint64_t> counts;
  for (double eta : etas) {
    ++counts[std::llround(eta * protocol_rate * scale)];
  }
  RateDistribution pdr;
  pdr.rounding_decimals = decimals;
  for (const auto& [key, count] : counts) {
    pdr.rate_values.push_back(static_cast<double>(key) / scale);
    pdr.probabilities.push_back(static_cast<double>(count) /
                                static_cast<double>(etas.size()));
  }
  return pdr;
}

inline RateDistribution key_rate_distribution(
    const ChannelScene& scene, Protocol protocol, int d, double q, double xi,
    std::size_t n_samples, int rounding_decimals, std::uint64_t seed) {
  const double rate = protocol_key_rate(protocol, d, q, xi);
  return rate_distribution(sample_transmittances(scene, n_samples, seed), rate,
                           rounding_decimals);
}

}  // namespace hdqkd

#endif  // HDQKD_BEAM_TRANSMIT_HPP_
