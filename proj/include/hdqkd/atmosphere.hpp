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

#ifndef HDQKD_ATMOSPHERE_HPP_
#define HDQKD_ATMOSPHERE_HPP_

// Slab-atmosphere satellite link: geometry, weather presets, derived optical
// quantities, first and second moments of the elliptic-beam parameters, and
// a sampler for the beam vector v = (x0, y0, W1, W2, phi).
//
// The atmosphere is a uniform layer of thickness h_bar under vacuum up to
// the satellite altitude L_bar. At zenith angle phi the slant link length is
// L = L_bar sec(phi) and the in-atmosphere path is h = h_bar sec(phi). For a
// down-link the layer sits at the end of the path, for an up-link at the
// start, which changes the beam-spread moments.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hdqkd/errors.hpp"

namespace hdqkd {

enum class LinkDirection { kUp, kDown };

inline std::string_view to_string(LinkDirection d) {
  return d == LinkDirection::kUp ? "up" : "down";
}

inline LinkDirection parse_direction(std::string_view s) {
  if (s == "up" || s == "up-link" || s == "uplink") return LinkDirection::kUp;
  if (s == "down" || s == "down-link" || s == "downlink") {
    return LinkDirection::kDown;
  }
  throw DomainError("unknown link direction '" + std::string(s) +
                    "' (expected up or down)");
}

// Down-link centroid variance <x0^2> given the angular pointing error alpha
// and slant length L.
enum class PointingModel {
  kOff,            // 0
  kAlphaLSquared,  // (alpha L)^2
  kAlphaSqL,       // alpha^2 L
  kLiteralAlphaL,  // alpha L, read as m^2
};

inline std::string_view to_string(PointingModel m) {
  switch (m) {
    case PointingModel::kOff:
      return "off";
    case PointingModel::kAlphaLSquared:
      return "alpha_L_squared";
    case PointingModel::kAlphaSqL:
      return "alpha_sq_L";
    case PointingModel::kLiteralAlphaL:
      return "literal_alpha_L";
  }
  return "off";
}

inline PointingModel parse_pointing_model(std::string_view s) {
  if (s == "off") return PointingModel::kOff;
  if (s == "alpha_L_squared") return PointingModel::kAlphaLSquared;
  if (s == "alpha_sq_L") return PointingModel::kAlphaSqL;
  if (s == "literal_alpha_L") return PointingModel::kLiteralAlphaL;
  throw DomainError("unknown pointing_model '" + std::string(s) +
                    "' (expected off, alpha_L_squared, alpha_sq_L or "
                    "literal_alpha_L)");
}

inline constexpr double kMaxZenithRad = 80.0 * std::numbers::pi / 180.0;

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct WeatherPreset {
  std::string_view name;
  double cn2;  // m^(-2/3)
  double n0;   // m^-3
};

inline constexpr std::array<WeatherPreset, 6> kWeatherPresets{{
    {"night1", 1.12e-16, 0.61},
    {"day1", 1.64e-16, 0.01},
    {"night2", 5.50e-16, 3.00},
    {"day2", 8.00e-16, 0.05},
    {"night3", 1.10e-15, 6.10},
    {"day3", 1.60e-15, 0.10},
}};

inline WeatherPreset weather_preset(std::string_view name) {
  for (const auto& p : kWeatherPresets) {
    if (p.name == name) return p;
  }
  std::string valid;
  for (const auto& p : kWeatherPresets) {
    if (!valid.empty()) valid += ", ";
    valid += p.name;
  }
  throw DomainError("unknown weather preset '" + std::string(name) +
                    "' (valid presets: " + valid + ")");
}

struct ChannelScene {
  LinkDirection direction = LinkDirection::kDown;
  double L_bar = 500e3;   // satellite altitude at zenith (m)
  double h_bar = 20e3;    // atmosphere thickness (m)
  double zenith = 0.0;    // rad
  double lambda = 785e-9; // m
  double W0 = 0.15;       // transmitter beam-spot radius (m)
  double r_ap = 0.5;      // receiver aperture radius (m)
  double alpha = 2e-6;    // angular pointing error (rad)
  double beta = 0.7;      // extinction parameter
  double cn2 = 1.64e-16;  // m^(-2/3)
  double n0 = 0.01;       // m^-3
  PointingModel pointing_model = PointingModel::kAlphaLSquared;

  void validate() const;
};

/// Table optics for the given direction (transmitter and receiver radii swap
/// between down- and up-link) combined with a weather preset.
inline ChannelScene default_scene(LinkDirection direction,
                                  std::string_view weather = "day1") {
  ChannelScene s;
  s.direction = direction;
  if (direction == LinkDirection::kUp) {
    s.W0 = 0.5;
    s.r_ap = 0.15;
  } else {
    s.W0 = 0.15;
    s.r_ap = 0.5;
  }
  const WeatherPreset w = weather_preset(weather);
  s.cn2 = w.cn2;
  s.n0 = w.n0;
  return s;
}

namespace detail {

inline void require(bool ok, const char* field, double value,
                    const char* constraint) {
  if (!ok) {
    std::ostringstream msg;
    msg << "scene field " << field << " = " << value << " violates "
        << constraint;
    throw DomainError(msg.str());
  }
}

inline void validate_zenith(double zenith) {
  if (!(zenith >= 0.0 && zenith <= kMaxZenithRad + 1e-12)) {
    std::ostringstream msg;
    msg << "zenith angle " << rad_to_deg(zenith)
        << " deg is outside the model range [0, 80] deg";
    throw DomainError(msg.str());
  }
}

}  // namespace detail

inline void ChannelScene::validate() const {
  detail::require(h_bar > 0.0, "h_bar", h_bar, "h_bar > 0");
  detail::require(L_bar > h_bar, "L_bar", L_bar, "L_bar > h_bar");
  detail::validate_zenith(zenith);
  detail::require(lambda > 0.0, "lambda", lambda, "lambda > 0");
  detail::require(W0 > 0.0, "W0", W0, "W0 > 0");
  detail::require(r_ap > 0.0, "r_ap", r_ap, "r_ap > 0");
  detail::require(alpha >= 0.0, "alpha", alpha, "alpha >= 0");
  detail::require(beta >= 0.0, "beta", beta, "beta >= 0");
  detail::require(cn2 >= 0.0, "Cn2", cn2, "Cn2 >= 0");
  detail::require(n0 >= 0.0, "n0", n0, "n0 >= 0");
}

struct LinkGeometry {
  double L;  // slant link length (m)
  double h;  // slant path inside the atmosphere (m)
};

inline LinkGeometry link_geometry(double L_bar, double h_bar, double zenith) {
  detail::validate_zenith(zenith);
  const double sec = 1.0 / std::cos(zenith);
  return {L_bar * sec, h_bar * sec};
}

/// Zenith angle at which the slant length equals L.
inline double zenith_for_length(double L_bar, double L) {
  if (!(L >= L_bar)) {
    std::ostringstream msg;
    msg << "link length " << L << " m is shorter than the zenith altitude "
        << L_bar << " m";
    throw DomainError(msg.str());
  }
  const double zenith = std::acos(L_bar / L);
  detail::validate_zenith(zenith);
  return zenith;
}

struct DerivedOptics {
  double k;         // wave number (rad/m)
  double omega;     // Fresnel number k W0^2 / (2L)
  double sigma_r2;  // Rytov variance 1.23 Cn2 k^(7/6) L^(11/6)
};

inline DerivedOptics derived_optics(const ChannelScene& scene) {
  scene.validate();
  const LinkGeometry g = link_geometry(scene.L_bar, scene.h_bar, scene.zenith);
  DerivedOptics o;
  o.k = 2.0 * std::numbers::pi / scene.lambda;
  o.omega = o.k * scene.W0 * scene.W0 / (2.0 * g.L);
  o.sigma_r2 =
      1.23 * scene.cn2 * std::pow(o.k, 7.0 / 6.0) * std::pow(g.L, 11.0 / 6.0);
  return o;
}

/// chi_ext = exp(-beta sec(zenith)).
inline double extinction_factor(double zenith, double beta) {
  detail::validate_zenith(zenith);
  if (!(beta >= 0.0)) {
    throw DomainError("extinction parameter beta must be >= 0");
  }
  return std::exp(-beta / std::cos(zenith));
}

using Matrix2 = std::array<std::array<double, 2>, 2>;

struct BeamMoments {
  double var_centroid = 0.0;  // <x0^2> = <y0^2> (m^2)
  double mean_W2 = 0.0;       // <W_i^2> (m^2)
  Matrix2 cov_W2{};           // <dW_i^2 dW_j^2> (m^4)
  double W0 = 0.0;
};

namespace detail {

inline double finite_or_throw(double v, const char* term) {
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "beam moment term '" << term << "' is not finite (" << v << ")";
    throw NumericError(msg.str());
  }
  return v;
}

// (2 delta_ij - 0.8) s
inline Matrix2 structured_covariance(double s) {
  return {{{1.2 * s, -0.8 * s}, {-0.8 * s, 1.2 * s}}};
}

}  // namespace detail

inline BeamMoments beam_moments(const ChannelScene& scene) {
  const DerivedOptics o = derived_optics(scene);
  const LinkGeometry g = link_geometry(scene.L_bar, scene.h_bar, scene.zenith);
  const double W0 = scene.W0;
  const double W0_2 = W0 * W0;
  const double W0_4 = W0_2 * W0_2;
  const double ratio = g.h / g.L;
  const double diffraction = W0_2 / (o.omega * o.omega);

  BeamMoments m;
  m.W0 = W0;
  if (scene.direction == LinkDirection::kUp) {
    const double scattering =
        1.0 + std::numbers::pi / 8.0 * g.L * scene.n0 * W0_2 * ratio;
    m.var_centroid = detail::finite_or_throw(
        0.419 * o.sigma_r2 * W0_2 * std::pow(o.omega, -7.0 / 6.0) * ratio,
        "centroid variance");
    m.mean_W2 = detail::finite_or_throw(
        diffraction *
            (scattering + 2.6 * o.sigma_r2 * std::pow(o.omega, 5.0 / 6.0) * ratio),
        "mean W^2");
    const double s = detail::finite_or_throw(
        W0_4 / std::pow(o.omega, 19.0 / 6.0) * scattering * o.sigma_r2 * ratio,
        "W^2 covariance");
    m.cov_W2 = detail::structured_covariance(s);
    return m;
  }

  const double ratio3 = ratio * ratio * ratio;
  const double ratio83 = std::pow(ratio, 8.0 / 3.0);
  const double scattering =
      1.0 + std::numbers::pi / 24.0 * g.L * scene.n0 * W0_2 * ratio3;
  switch (scene.pointing_model) {
    case PointingModel::kOff:
      m.var_centroid = 0.0;
      break;
    case PointingModel::kAlphaLSquared:
      m.var_centroid = (scene.alpha * g.L) * (scene.alpha * g.L);
      break;
    case PointingModel::kAlphaSqL:
      m.var_centroid = scene.alpha * scene.alpha * g.L;
      break;
    case PointingModel::kLiteralAlphaL:
      m.var_centroid = scene.alpha * g.L;
      break;
  }
  detail::finite_or_throw(m.var_centroid, "centroid variance");
  m.mean_W2 = detail::finite_or_throw(
      diffraction *
          (scattering + 1.6 * o.sigma_r2 * std::pow(o.omega, 5.0 / 6.0) * ratio83),
      "mean W^2");
  const double s = detail::finite_or_throw(
      3.0 / 8.0 * W0_4 / std::pow(o.omega, 19.0 / 6.0) * scattering *
          o.sigma_r2 * ratio83,
      "W^2 covariance");
  m.cov_W2 = detail::structured_covariance(s);
  return m;
}

/// Normal law of Theta_i = ln(W_i^2 / W0^2), moment-matched so that
/// W0^2 exp(Theta) reproduces <W_i^2> and <dW_i^2 dW_j^2>.
struct ThetaLawParams {
  std::array<double, 2> mu{};
  Matrix2 sigma{};
  double W0 = 0.0;
};

inline ThetaLawParams theta_law(const BeamMoments& m) {
  if (!(m.W0 > 0.0) || !(m.mean_W2 > 0.0)) {
    throw DomainError("beam moments need W0 > 0 and mean_W2 > 0");
  }
  const double rel_mean = m.mean_W2 / (m.W0 * m.W0);
  const double W0_4 = m.W0 * m.W0 * m.W0 * m.W0;
  const double m2 = rel_mean * rel_mean;
  ThetaLawParams t;
  t.W0 = m.W0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double arg = 1.0 + m.cov_W2[i][j] / W0_4 / m2;
      if (!(arg > 0.0)) {
        std::ostringstream msg;
        msg << "lognormal moment matching breaks down: 1 + c_" << i + 1 << j + 1
            << "/m^2 = " << arg << " <= 0 (parameters outside the model range)";
        throw DomainError(msg.str());
      }
      t.sigma[i][j] = std::log(arg);
    }
  }
  const double det = t.sigma[0][0] * t.sigma[1][1] - t.sigma[0][1] * t.sigma[1][0];
  if (t.sigma[0][0] < 0.0 || t.sigma[1][1] < 0.0 || det < -1e-15) {
    std::ostringstream msg;
    msg << "Theta covariance is not positive semi-definite (det = " << det
        << "); parameters outside the model range";
    throw DomainError(msg.str());
  }
  for (int i = 0; i < 2; ++i) {
    t.mu[i] = std::log(rel_mean) - t.sigma[i][i] / 2.0;
  }
  return t;
}

struct BeamVector {
  double x0 = 0.0;
  double y0 = 0.0;
  double W1 = 1.0;
  double W2 = 1.0;
  double phi_rel = 0.0;  // phi - theta0, in [0, pi/2]

  double rho0() const { return std::hypot(x0, y0); }
};

/// Draws one beam: x0, y0 ~ N(0, var_centroid); (Theta1, Theta2) ~ N(mu,
/// sigma); W_i = W0 exp(Theta_i / 2); phi_rel ~ U[0, pi/2]. Consumes the
/// generator in that order.
template <class URBG>
BeamVector sample_beam_vector(const ThetaLawParams& law, double var_centroid,
                              URBG& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2.0);
  const double sd = std::sqrt(var_centroid);
  BeamVector v;
  v.x0 = sd * normal(rng);
  v.y0 = sd * normal(rng);

  const double l11 = std::sqrt(std::max(0.0, law.sigma[0][0]));
  const double l21 = l11 > 0.0 ? law.sigma[1][0] / l11 : 0.0;
  const double l22 = std::sqrt(std::max(0.0, law.sigma[1][1] - l21 * l21));
  const double z1 = normal(rng);
  const double z2 = normal(rng);
  const double theta1 = law.mu[0] + l11 * z1;
  const double theta2 = law.mu[1] + l21 * z1 + l22 * z2;
  v.W1 = law.W0 * std::exp(theta1 / 2.0);
  v.W2 = law.W0 * std::exp(theta2 / 2.0);
  v.phi_rel = angle(rng);
  return v;
}

}  // namespace hdqkd

#endif  // HDQKD_ATMOSPHERE_HPP_
