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

#ifndef HDQKD_EXT_B92_HPP_
#define HDQKD_EXT_B92_HPP_

// High-dimensional extended B92: parameter estimation under a depolarizing
// channel and the asymptotic collective-attack key rate
//
//   R = xi * max(0, S(a|E) - H(a|b)),
//
// where S(a|E) is replaced by its lower bound built from observable
// statistics. Alice sends |m> for key bit 0 and |psi> = (|m>+|n>)/sqrt(2)
// for key bit 1; every quantity below depends only on the detection
// probabilities p_{vc} (Z outcome c) and p_{v psi} (X outcome psi).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hdqkd/depolarizing.hpp"
#include "hdqkd/entropy.hpp"
#include "hdqkd/errors.hpp"

namespace hdqkd::ext_b92 {

/// Detection statistics of the three transmitted states after D_q.
///
/// The depolarizing channel is symmetric, so the 12 observable
/// probabilities collapse onto three classes:
///   p_mm = p_nn = p_psipsi          (correct outcome)
///   p_mc = p_nc = p_psic            (c outside the sent support)
///   p_mpsi = p_npsi = p_psim = p_psin (conflicting-basis overlap)
struct ObservableStats {
  int d = 2;
  double q = 0.0;
  double p_mm = 1.0;
  double p_nn = 1.0;
  double p_psipsi = 1.0;
  double p_cross = 0.0;
  double p_conf = 0.5;

  // Named accessors for the Appendix-style symbols used by the bound.
  double p_mn() const { return p_cross; }
  double p_nm() const { return p_cross; }
  double p_mc() const { return p_cross; }
  double p_nc() const { return p_cross; }
  double p_psic() const { return p_cross; }
  double p_mpsi() const { return p_conf; }
  double p_psim() const { return p_conf; }
  double p_psin() const { return p_conf; }
};

inline ObservableStats depolarizing_stats(int d, double q) {
  validate_dimension_and_noise(d, q);
  ObservableStats s;
  s.d = d;
  s.q = q;
  s.p_mm = s.p_nn = s.p_psipsi = 1.0 - q;
  s.p_cross = q / (d - 1.0);
  s.p_conf = 0.5 * (1.0 - q * d / (d - 1.0)) + q / (d - 1.0);
  return s;
}

// Sum of the (unnormalized) conclusive-round weights; p_ij = w_ij / (2M).
inline double normalization(const ObservableStats& s) {
  return 0.5 * ((1.0 - s.p_mpsi()) + (1.0 - s.p_mm) + (1.0 - s.p_psipsi) +
                (1.0 - s.p_psim()));
}

/// Joint distribution of (Alice bit, Bob bit) on conclusive rounds.
struct JointDistribution {
  double p00 = 0.5;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 0.5;
  double M = 0.5;

  std::array<double, 4> as_array() const { return {p00, p01, p10, p11}; }
};

inline JointDistribution joint_distribution(const ObservableStats& s) {
  const double M = normalization(s);
  if (!(M > 0.0) || !std::isfinite(M)) {
    std::ostringstream msg;
    msg << "normalization M = " << M << " is not positive (d = " << s.d
        << ", q = " << s.q << ")";
    throw NumericError(msg.str());
  }
  JointDistribution j;
  j.M = M;
  j.p00 = (1.0 - s.p_mpsi()) / (2.0 * M);
  j.p01 = (1.0 - s.p_mm) / (2.0 * M);
  j.p10 = (1.0 - s.p_psipsi) / (2.0 * M);
  // Bob's bit-1 outcome is the Z-basis detection of |m>; read p_psi i as
  // p_psi m.
  j.p11 = (1.0 - s.p_psim()) / (2.0 * M);
  return j;
}

/// H(a|b) = H(p00, p01, p10, p11) - h(p00 + p10).
inline double conditional_entropy_ab(const JointDistribution& j) {
  const auto p = j.as_array();
  return shannon_entropy(p) - binary_entropy(j.p00 + j.p10);
}

/// One term of the von Neumann bound: K^0 = <E^0|E^0>, K^1 = <E^1|E^1>,
/// re = Re<E^0|E^1>.
struct BoundTerm {
  double k0 = 0.0;
  double k1 = 0.0;
  double re = 0.0;

  double weight() const { return k0 + k1; }
};

struct EveBoundTerms {
  BoundTerm c;  // shared by every c outside {m, n}
  BoundTerm m;
  BoundTerm n;
  int multiplicity = 0;  // d - 2 copies of `c`
  double M = 0.5;
};

inline EveBoundTerms eve_bound_terms(const ObservableStats& s) {
  constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
  EveBoundTerms t;
  t.multiplicity = s.d - 2;
  t.M = normalization(s);

  t.c.k0 = s.p_mc();
  t.c.k1 = s.p_psic();
  t.c.re = kInvSqrt2 * (s.p_mc() / 2.0 + s.p_psic() - s.p_nc() / 2.0);

  t.m.k0 = 0.25 * s.p_mm;
  t.m.k1 = 0.25 * s.p_psim();
  t.m.re = kInvSqrt2 / 4.0 * (s.p_mm / 2.0 + s.p_psim() - s.p_nm() / 2.0);

  t.n.k0 = 0.75 * s.p_mn();
  t.n.k1 = 0.75 * s.p_psin();
  t.n.re = 3.0 * kInvSqrt2 / 4.0 * (s.p_mn() / 2.0 + s.p_psin() - s.p_nn / 2.0);
  return t;
}

// S_x = h(K0/(K0+K1)) - h(delta_x); zero when either weight vanishes.
inline double term_entropy(const BoundTerm& t) {
  if (!(t.k0 > 0.0) || !(t.k1 > 0.0)) return 0.0;
  const double sum = t.weight();
  const double radicand =
      std::max(0.0, (t.k0 - t.k1) * (t.k0 - t.k1) + 4.0 * t.re * t.re);
  double delta = 0.5 + std::sqrt(radicand) / (2.0 * sum);
  if (delta > 1.0 && delta <= 1.0 + kProbabilitySlack) delta = 1.0;
  return binary_entropy(t.k0 / sum) - binary_entropy(delta);
}

/// Lower bound on S(a|E): sum over x of ((K_x^0 + K_x^1)/M) S_x.
inline double von_neumann_lower_bound(const EveBoundTerms& t) {
  double bound = t.multiplicity * (t.c.weight() / t.M) * term_entropy(t.c);
  bound += (t.m.weight() / t.M) * term_entropy(t.m);
  bound += (t.n.weight() / t.M) * term_entropy(t.n);
  return bound;
}

// Rate before clamping; negative values mean no key can be distilled.
inline double raw_key_rate(int d, double q) {
  const ObservableStats s = depolarizing_stats(d, q);
  return von_neumann_lower_bound(eve_bound_terms(s)) -
         conditional_entropy_ab(joint_distribution(s));
}

/// Bits per conclusive pulse.
inline double key_rate(int d, double q, double xi = 1.0) {
  validate_negotiation_efficiency(xi);
  return xi * std::max(0.0, raw_key_rate(d, q));
}

/// Probability that Alice's and Bob's conclusive raw bits disagree.
inline double qber(int d, double q) {
  const JointDistribution j = joint_distribution(depolarizing_stats(d, q));
  return j.p01 + j.p10;
}

}  // namespace hdqkd::ext_b92

#endif  // HDQKD_EXT_B92_HPP_
