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

#ifndef HDQKD_PROTOCOL_HPP_
#define HDQKD_PROTOCOL_HPP_

#include <string>
#include <string_view>

#include "hdqkd/bb84.hpp"
#include "hdqkd/errors.hpp"
#include "hdqkd/ext_b92.hpp"

namespace hdqkd {

enum class Protocol { kExtB92, kBb84 };

inline std::string_view to_string(Protocol p) {
  return p == Protocol::kExtB92 ? "ext_b92" : "bb84";
}

inline Protocol parse_protocol(std::string_view name) {
  if (name == "ext_b92") return Protocol::kExtB92;
  if (name == "bb84") return Protocol::kBb84;
  throw DomainError("unknown protocol '" + std::string(name) +
                    "' (expected ext_b92 or bb84)");
}

/// Per-pulse secret-key rate for an ideal (eta = 1) channel.
inline double protocol_key_rate(Protocol p, int d, double q, double xi = 1.0) {
  switch (p) {
    case Protocol::kExtB92:
      return ext_b92::key_rate(d, q, xi);
    case Protocol::kBb84:
      return bb84::key_rate(bb84::Params(d, q, xi));
  }
  return 0.0;
}

inline double protocol_qber(Protocol p, int d, double q) {
  return p == Protocol::kExtB92 ? ext_b92::qber(d, q)
                                : bb84::qber(bb84::Params(d, q));
}

inline double protocol_noise_tolerance(Protocol p, int d) {
  return noise_tolerance(
      [p, d](double q) { return protocol_key_rate(p, d, q); },
      max_depolarizing_noise(d));
}

}  // namespace hdqkd

#endif  // HDQKD_PROTOCOL_HPP_
