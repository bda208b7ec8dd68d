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

#include "hdqkd/beam_transmit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "riemann_oracle.hpp"

namespace hdqkd {
namespace {

BeamVector circular(double W, double rho0 = 0.0) {
  BeamVector b;
  b.x0 = rho0;
  b.W1 = b.W2 = W;
  return b;
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (std::size_t n : {1u, 2u, 5u, 16u, 33u}) {
    const auto rule = quadrature::gauss_legendre(n);
    for (std::size_t deg = 0; deg < 2 * n; ++deg) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], deg);
      const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1.0);
      EXPECT_NEAR(sum, exact, 1e-13) << "n=" << n << " deg=" << deg;
    }
  }
}

TEST(ApertureTransmittance, CentredCircularClosedForm) {
  EXPECT_NEAR(aperture_transmittance(circular(1.0), 1.0, 1.0),
              0.86466471676338730811, 1e-9);
  for (double W : {0.2, 0.7, 1.5}) {
    for (double r : {0.1, 0.5, 1.0}) {
      const double exact = 1.0 - std::exp(-2.0 * r * r / (W * W));
      EXPECT_NEAR(aperture_transmittance(circular(W), r, 0.5), 0.5 * exact, 1e-5 * exact);
    }
  }
}

TEST(ApertureTransmittance, FullCaptureAndMiss) {
  BeamVector b = circular(0.3);
  b.W2 = 0.2;
  b.phi_rel = 0.4;
  EXPECT_NEAR(aperture_transmittance(b, 3.0, 0.7), 0.7, 1e-9);
  EXPECT_LT(aperture_transmittance(circular(0.5, 10.0), 0.5, 1.0), 1e-10);
}

TEST(ApertureTransmittance, Validation) {
  EXPECT_THROW(aperture_transmittance(circular(1.0), 0.0, 1.0), DomainError);
  EXPECT_THROW(aperture_transmittance(circular(1.0), 1.0, 0.0), DomainError);
  EXPECT_THROW(aperture_transmittance(circular(1.0), 1.0, 1.2), DomainError);
  EXPECT_THROW(aperture_transmittance(circular(-1.0), 1.0, 1.0), DomainError);
}

TEST(ApertureTransmittance, MatchesCartesianRiemannOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> width(0.2, 2.0);
  std::uniform_real_distribution<double> offset(0.0, 1.5);
  std::uniform_real_distribution<double> radius(0.1, 1.0);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2.0);
  for (int i = 0; i < 12; ++i) {
    BeamVector b;
    b.W1 = width(rng);
    b.W2 = width(rng);
    b.x0 = offset(rng);
    b.phi_rel = angle(rng);
    const double r = radius(rng);
    const double oracle = testing_oracle::riemann_transmittance(b, r, 2000);
    EXPECT_NEAR(aperture_transmittance(b, r, 1.0), oracle, 1e-4) << "beam " << i;
  }
}

TEST(ApertureTransmittance, OnlyCentroidDistanceMatters) {
  BeamVector a = circular(0.6);
  a.x0 = 0.3;
  a.y0 = 0.4;
  EXPECT_NEAR(aperture_transmittance(a, 0.5, 1.0),
              aperture_transmittance(circular(0.6, 0.5), 0.5, 1.0), 1e-12);
}

TEST(ApertureTransmittance, MonotoneInCentroidOffset) {
  double prev = 1.0;
  for (int i = 0; i <= 40; ++i) {
    const double eta = aperture_transmittance(circular(0.8, 0.05 * i), 0.5, 1.0);
    EXPECT_LE(eta, prev + 1e-12);
    prev = eta;
  }
}

TEST(ApertureTransmittance, EllipseSwapSymmetry) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 1.5);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2.0);
  for (int i = 0; i < 50; ++i) {
    BeamVector b;
    b.W1 = u(rng);
    b.W2 = u(rng);
    b.x0 = u(rng) - 0.1;
    b.phi_rel = angle(rng);
    BeamVector swapped = b;
    std::swap(swapped.W1, swapped.W2);
    swapped.phi_rel = std::numbers::pi / 2.0 - b.phi_rel;
    const double r = u(rng);
    EXPECT_NEAR(aperture_transmittance(b, r, 1.0), aperture_transmittance(swapped, r, 1.0),
                1e-8);
  }
}

ChannelScene deterministic_scene() {
  ChannelScene s = default_scene(LinkDirection::kDown, "day1");
  s.cn2 = 0.0;
  s.n0 = 0.0;
  s.pointing_model = PointingModel::kOff;
  return s;
}

TEST(EstimatePdt, DeterministicBeamFillsOneBin) {
  const auto pdt = estimate_pdt(deterministic_scene(), 300, 100, 1);
  int occupied = 0;
  for (double p : pdt.probabilities) {
    if (p > 0.0) {
      ++occupied;
      EXPECT_DOUBLE_EQ(p, 1.0);
    }
  }
  EXPECT_EQ(occupied, 1);
  EXPECT_EQ(pdt.n_bins, 100u);
  EXPECT_EQ(pdt.n_samples, 300u);
}

TEST(EstimatePdt, NormalizedAndSeedDeterministic) {
  const auto scene = default_scene(LinkDirection::kUp, "day1");
  const auto a = estimate_pdt(scene, 2000, 50, 42);
  const auto b = estimate_pdt(scene, 2000, 50, 42);
  double total = 0.0;
  for (double p : a.probabilities) total += p;
  EXPECT_NEAR(total, 1.0, 1e-9);
  for (double c : a.bin_centers) {
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
  EXPECT_EQ(a.probabilities, b.probabilities);
  EXPECT_EQ(a.mean_eta, b.mean_eta);
  const auto c = estimate_pdt(scene, 2000, 50, 43);
  EXPECT_NE(a.mean_eta, c.mean_eta);
}

TEST(EstimatePdt, DownLinkDay1ZenithMean) {
  ChannelScene s = default_scene(LinkDirection::kDown, "day1");
  s.pointing_model = PointingModel::kOff;
  const auto pdt = estimate_pdt(s, 10000, 100, 7);
  EXPECT_NEAR(pdt.mean_eta, 0.245, 0.02);
  EXPECT_NEAR(pdt.chi_ext, std::exp(-0.7), 1e-15);
}

TEST(EstimatePdt, Validation) {
  EXPECT_THROW(estimate_pdt(deterministic_scene(), 0, 10, 1), DomainError);
  EXPECT_THROW(estimate_pdt(deterministic_scene(), 10, 0, 1), DomainError);
}

TEST(EstimatePdt, StandardErrorScalesWithSampleCount) {
  const auto scene = default_scene(LinkDirection::kUp, "day1");
  auto spread = [&](std::size_t n) {
    std::vector<double> means;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      means.push_back(estimate_pdt(scene, n, 10, 1000 + seed).mean_eta);
    }
    double mu = 0.0;
    for (double m : means) mu += m;
    mu /= means.size();
    double var = 0.0;
    for (double m : means) var += (m - mu) * (m - mu);
    return std::sqrt(var / (means.size() - 1.0));
  };
  // Quadrupling the sample count halves the standard error of the mean.
  const double ratio = spread(200) / spread(800);
  EXPECT_GT(ratio, 1.5);
  EXPECT_LT(ratio, 2.7);
}

TEST(BinTransmittances, BinMeansRecoverSampleMean) {
  const std::vector<double> etas{0.0011, 0.0013, 0.0019, 0.42, 0.425, 0.999, 1.0};
  const auto pdt = bin_transmittances(etas, 100);
  double weighted = 0.0;
  for (std::size_t i = 0; i < pdt.n_bins; ++i) {
    EXPECT_GE(pdt.bin_means[i], i / 100.0);
    EXPECT_LE(pdt.bin_means[i], (i + 1) / 100.0);
    weighted += pdt.bin_means[i] * pdt.probabilities[i];
  }
  EXPECT_NEAR(weighted, pdt.mean_eta, 1e-15);
  EXPECT_NEAR(pdt.bin_centers[0], 0.005, 1e-15);
  EXPECT_NEAR(pdt.bin_means[0], 0.0043 / 3.0, 1e-15);
}

TEST(AverageKeyRate, NarrowChannelIsNotRoundedToBinMidpoint) {
  const auto pdt = bin_transmittances(std::vector<double>(50, 0.0017), 100);
  EXPECT_NEAR(average_key_rate(pdt, Protocol::kBb84, 32, 0.0), 5.0 * 0.0017, 1e-15);
}

TransmittanceDistribution point_mass(double eta) {
  TransmittanceDistribution pdt;
  pdt.bin_centers = {eta};
  pdt.probabilities = {1.0};
  pdt.n_bins = 1;
  pdt.n_samples = 1;
  return pdt;
}

TEST(AverageKeyRate, LinearInTransmittance) {
  EXPECT_DOUBLE_EQ(average_key_rate(point_mass(1.0), Protocol::kBb84, 2, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(average_key_rate(point_mass(0.5), Protocol::kBb84, 2, 0.0), 0.5);
}

TEST(AverageKeyRate, LinearInEfficiencyAndBounded) {
  const auto scene = default_scene(LinkDirection::kDown, "day2");
  const auto pdt = estimate_pdt(scene, 500, 100, 3);
  for (Protocol p : {Protocol::kExtB92, Protocol::kBb84}) {
    const double full = average_key_rate(pdt, p, 8, 0.01, 1.0);
    EXPECT_NEAR(average_key_rate(pdt, p, 8, 0.01, 0.4), 0.4 * full, 1e-15);
    EXPECT_LE(full, pdt.chi_ext * protocol_key_rate(p, 8, 0.01));
  }
}

TEST(AverageKeyRate, DownLinkBeatsUpLink) {
  for (const char* w : {"day1", "night2"}) {
    const auto down = estimate_pdt(default_scene(LinkDirection::kDown, w), 1000, 100, 5);
    const auto up = estimate_pdt(default_scene(LinkDirection::kUp, w), 1000, 100, 5);
    EXPECT_GT(average_key_rate(down, Protocol::kBb84, 32, 0.0),
              average_key_rate(up, Protocol::kBb84, 32, 0.0));
  }
}

TEST(KeyRateDistribution, DeterministicBeamGivesSingleValue) {
  const auto pdr = key_rate_distribution(deterministic_scene(), Protocol::kExtB92, 32, 0.0,
                                         1.0, 200, 6, 1);
  ASSERT_EQ(pdr.rate_values.size(), 1u);
  EXPECT_DOUBLE_EQ(pdr.probabilities[0], 1.0);
  EXPECT_EQ(pdr.rounding_decimals, 6);
}

TEST(KeyRateDistribution, SeedDeterministicAndNormalized) {
  const auto scene = default_scene(LinkDirection::kDown, "day1");
  const auto a = key_rate_distribution(scene, Protocol::kBb84, 32, 0.0, 1.0, 3000, 5, 11);
  const auto b = key_rate_distribution(scene, Protocol::kBb84, 32, 0.0, 1.0, 3000, 5, 11);
  EXPECT_EQ(a.rate_values, b.rate_values);
  EXPECT_EQ(a.probabilities, b.probabilities);
  double total = 0.0;
  for (double p : a.probabilities) total += p;
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_TRUE(std::is_sorted(a.rate_values.begin(), a.rate_values.end()));
}

TEST(KeyRateDistribution, HigherNoiseLowersRatesAndSharpensPeak) {
  ChannelScene s = default_scene(LinkDirection::kDown, "day1");
  const auto low = key_rate_distribution(s, Protocol::kExtB92, 32, 0.02, 1.0, 100000, 6, 21);
  const auto high = key_rate_distribution(s, Protocol::kExtB92, 32, 0.06, 1.0, 100000, 6, 21);
  EXPECT_GT(low.rate_values.back(), high.rate_values.back());
  EXPECT_GT(*std::max_element(high.probabilities.begin(), high.probabilities.end()),
            *std::max_element(low.probabilities.begin(), low.probabilities.end()));
}

TEST(KeyRateDistribution, DefaultRounding) {
  EXPECT_EQ(default_rounding_decimals(Protocol::kExtB92), 6);
  EXPECT_EQ(default_rounding_decimals(Protocol::kBb84), 5);
}

}  // namespace
}  // namespace hdqkd
