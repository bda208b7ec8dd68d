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

#ifndef HDQKD_DEPOLARIZING_HPP_
#define HDQKD_DEPOLARIZING_HPP_

#include <sstream>

#include "hdqkd/errors.hpp"

namespace hdqkd {

// Largest depolarizing weight for which D_q stays a positive map.
inline double max_depolarizing_noise(int d) { return (d - 1.0) / d; }

inline void validate_dimension_and_noise(int d, double q) {
  if (d < 2) {
    std::ostringstream msg;
    msg << "dimension d = " << d << " must be >= 2";
    throw DomainError(msg.str());
  }
  const double q_max = max_depolarizing_noise(d);
  if (!(q >= 0.0 && q <= q_max)) {
    std::ostringstream msg;
    msg << "noise q = " << q << " is outside [0, (d-1)/d] = [0, " << q_max
        << "] for d = " << d;
    throw DomainError(msg.str());
  }
}

inline void validate_negotiation_efficiency(double xi) {
  if (!(xi > 0.0 && xi <= 1.0)) {
    std::ostringstream msg;
    msg << "negotiation efficiency xi = " << xi << " is outside (0, 1]";
    throw DomainError(msg.str());
  }
}

}  // namespace hdqkd

#endif  // HDQKD_DEPOLARIZING_HPP_
