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

#ifndef HDQKD_BB84_HPP_
#define HDQKD_BB84_HPP_

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hdqkd/depolarizing.hpp"
#include "hdqkd/entropy.hpp"
#include "hdqkd/errors.hpp"

namespace hdqkd::bb84 {

/// Validated (d, q, xi). The basis-overlap constant is fixed at 1/d.
struct Params {
  int d = 2;
  double q = 0.0;
  double xi = 1.0;

  Params() = default;
  Params(int d_, double q_, double xi_ = 1.0) : d(d_), q(q_), xi(xi_) {
    validate_dimension_and_noise(d, q);
    validate_negotiation_efficiency(xi);
  }
};

// log2 d - 2 (h(q) + q log2(d-1)), unclamped.
inline double raw_key_rate(int d, double q) {
  validate_dimension_and_noise(d, q);
  const double symbol_leak = d == 2 ? 0.0 : q * std::log2(d - 1.0);
  return std::log2(static_cast<double>(d)) -
         2.0 * (binary_entropy(q) + symbol_leak);
}

/// Bits per sifted pulse.
inline double key_rate(const Params& p) {
  return p.xi * std::max(0.0, raw_key_rate(p.d, p.q));
}

/// Bit-error proxy for a balanced d-ary to binary mapping: a wrong symbol is
/// uniform over the d-1 alternatives and flips a given bit with probability
/// (d/2)/(d-1).
inline double qber(const Params& p) {
  return p.q * p.d / (2.0 * (p.d - 1.0));
}

}  // namespace hdqkd::bb84

namespace hdqkd {

// Rate at or below which the key is considered exhausted.
inline constexpr double kToleranceRateThreshold = 1e-9;
inline constexpr double kToleranceAbsTol = 1e-6;

/// Smallest q in [0, q_max] with rate_fn(q) <= 1e-9, by bisection to 1e-6.
/// rate_fn must be non-increasing on the interval.
template <class RateFn>
double noise_tolerance(RateFn&& rate_fn, double q_max) {
  const double at_zero = rate_fn(0.0);
  if (!(at_zero > kToleranceRateThreshold)) {
    std::ostringstream msg;
    msg << "no positive-rate region: rate(0) = " << at_zero;
    throw NumericError(msg.str());
  }
  const double at_max = rate_fn(q_max);
  if (!(at_max <= kToleranceRateThreshold)) {
    std::ostringstream msg;
    msg << "rate does not reach zero on [0, " << q_max << "]: rate(0) = "
        << at_zero << ", rate(" << q_max << ") = " << at_max;
    throw NumericError(msg.str());
  }
  double lo = 0.0;
  double hi = q_max;
  while (hi - lo > kToleranceAbsTol) {
    const double mid = 0.5 * (lo + hi);
    if (rate_fn(mid) > kToleranceRateThreshold) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace hdqkd

#endif  // HDQKD_BB84_HPP_
