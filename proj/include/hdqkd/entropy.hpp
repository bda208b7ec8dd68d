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

#ifndef HDQKD_ENTROPY_HPP_
#define HDQKD_ENTROPY_HPP_

#include <cmath>
#include <numeric>
#include <span>
#include <sstream>

#include "hdqkd/errors.hpp"

namespace hdqkd {

// Slack allowed on a probability before it is treated as out of range.
inline constexpr double kProbabilitySlack = 1e-12;
// Allowed deviation of a distribution's total mass from 1.
inline constexpr double kNormalizationSlack = 1e-9;

namespace detail {

inline double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace detail

// Clamps p into [0,1] when it lies within kProbabilitySlack of the interval,
// otherwise throws DomainError naming `what`.
inline double clamp_probability(double p, const char* what = "probability") {
  if (!(p >= -kProbabilitySlack && p <= 1.0 + kProbabilitySlack)) {
    std::ostringstream msg;
    msg << what << " " << p << " is outside [0, 1]";
    throw DomainError(msg.str());
  }
  return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

/// h(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.
inline double binary_entropy(double p) {
  p = clamp_probability(p, "binary_entropy argument");
  return -detail::plogp(p) - detail::plogp(1.0 - p);
}

/// Shannon entropy in bits of a normalized distribution.
inline double shannon_entropy(std::span<const double> dist) {
  double sum = 0.0;
  for (double p : dist) {
    clamp_probability(p, "distribution entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationSlack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "distribution is not normalized: entries sum to " << sum;
    throw DomainError(msg.str());
  }
  double h = 0.0;
  for (double p : dist) h -= detail::plogp(clamp_probability(p));
  return h;
}

inline double shannon_entropy(std::initializer_list<double> dist) {
  return shannon_entropy(std::span<const double>(dist.begin(), dist.size()));
}

}  // namespace hdqkd

#endif  // HDQKD_ENTROPY_HPP_
