// Copyright 2026 The imfl Authors
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

// Five-state input-affine model of a servo-electric injection-moulding
// machine:
//
//   x1  screw position            x1' = x2
//   x2  drive velocity            x2' = x3
//   x3  drive acceleration        x3' = -2 D w0 x3 - w0^2 x2 + K w0^2 U
//   x4  screw pressure            x4' = -(beta_s/x1) x2 - (Q beta_s/x1)(x4-x5)
//   x5  cavity pressure           x5' = (Q beta_c/v0)(x4-x5)
//
// with Q = pi R^4 / (8 v_sp L mu). The controlled output is x5.
//
// The parameter set mixes bar, cm and SI units and the state equations are
// used verbatim in those "model units"; no unit conversion is applied
// anywhere. x1 = 0 is a genuine singularity (division by screw position).

#ifndef IMFL_MODEL_HPP_
#define IMFL_MODEL_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "imfl/errors.hpp"

namespace imfl {

using Vec5 = std::array<double, 5>;

// Model constants. Defaults are the published parameter set for the machine;
// v_sp and v0 were never published and default to 1 (assumptions, echoed in
// run metadata).
struct PlantParams {
  double K = 23.4;         // servo drive gain
  double D = 0.79;         // servo drive damping ratio
  double w0 = 133.0;       // servo drive cut-off frequency [1/s]
  double beta_s = 8662.0;  // screw-side bulk modulus [bar]
  double beta_c = 8662.0;  // cavity-side bulk modulus [bar]
  double R = 0.2;          // nozzle radius [cm]
  double L = 8.0;          // nozzle length [cm]
  double mu = 60.0;        // melt viscosity [kg m^-1 s^-1]
  double v_sp = 1.0;       // melt specific volume (assumed)
  double v0 = 1.0;         // cavity reference volume (assumed)
  std::optional<double> u_limit{};  // symmetric |U| bound; unset = unlimited
};

// Nozzle flow coefficient Q = pi R^4 / (8 v_sp L mu). Single source of
// truth: Plant caches exactly this expression at construction.
inline double derive_q(const PlantParams& p) {
  return std::numbers::pi * p.R * p.R * p.R * p.R / (8.0 * p.v_sp * p.L * p.mu);
}

// Validated, immutable parameter set with Q cached once.
class Plant {
 public:
  explicit Plant(const PlantParams& p = {}) : p_(p) {
    requirePositiveFinite(p.K, "K");
    requirePositiveFinite(p.D, "D");
    requirePositiveFinite(p.w0, "w0");
    requirePositiveFinite(p.beta_s, "beta_s");
    requirePositiveFinite(p.beta_c, "beta_c");
    requirePositiveFinite(p.R, "R");
    requirePositiveFinite(p.L, "L");
    requirePositiveFinite(p.mu, "mu");
    requirePositiveFinite(p.v_sp, "v_sp");
    requirePositiveFinite(p.v0, "v0");
    if (p.u_limit && !(std::isfinite(*p.u_limit) && *p.u_limit > 0.0)) {
      throw ValidationError("plant.u_limit: u_limit > 0");
    }
    q_ = derive_q(p_);
    if (!(std::isfinite(q_) && q_ > 0.0)) {
      throw ValidationError("plant: derived Q must be strictly positive and finite");
    }
  }

  const PlantParams& params() const noexcept { return p_; }
  double q() const noexcept { return q_; }

 private:
  static void requirePositiveFinite(double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw ValidationError(std::string("plant.") + name + ": " + name + " > 0");
    }
  }

  PlantParams p_;
  double q_;
};

// State vector. screw_pos (x1) must stay strictly positive.
struct State {
  double screw_pos = 10.0;       // x1
  double drive_vel = 0.0;        // x2
  double drive_accel = 0.0;      // x3
  double screw_pressure = 0.0;   // x4
  double cavity_pressure = 0.0;  // x5

  Vec5 to_vec() const noexcept {
    return {screw_pos, drive_vel, drive_accel, screw_pressure, cavity_pressure};
  }
  static State from_vec(const Vec5& v) noexcept {
    return {v[0], v[1], v[2], v[3], v[4]};
  }
};

// Servo motor voltage command.
struct Input {
  double voltage = 0.0;
};

inline bool state_finite(const State& x) noexcept {
  return std::isfinite(x.screw_pos) && std::isfinite(x.drive_vel) &&
         std::isfinite(x.drive_accel) && std::isfinite(x.screw_pressure) &&
         std::isfinite(x.cavity_pressure);
}

inline void check_state(const State& x) {
  if (!(x.screw_pos > 0.0)) {
    throw SingularityError("state: x1 > 0 required (screw position singularity)");
  }
  if (!state_finite(x)) {
    throw ValidationError("state: all components must be finite");
  }
}

// Drift field f(x). Throws SingularityError for x1 <= 0 or a non-finite
// result.
inline Vec5 f_of(const State& x, const Plant& plant) {
  if (!(x.screw_pos > 0.0)) {
    throw SingularityError("f(x): x1 > 0 required");
  }
  const PlantParams& p = plant.params();
  const double x1 = x.screw_pos;
  const double x2 = x.drive_vel;
  const double x3 = x.drive_accel;
  const double d = x.screw_pressure - x.cavity_pressure;
  const double q = plant.q();

  Vec5 f{};
  f[0] = x2;
  f[1] = x3;
  f[2] = -2.0 * p.D * p.w0 * x3 - p.w0 * p.w0 * x2;
  f[3] = -(p.beta_s / x1) * x2 - (q * p.beta_s / x1) * d;
  f[4] = (q * p.beta_c / p.v0) * d;
  for (double c : f) {
    if (!std::isfinite(c)) {
      throw SingularityError("f(x): non-finite component");
    }
  }
  return f;
}

// Input field g. Constant in x: only the drive acceleration sees the input.
inline Vec5 g_of(const Plant& plant) noexcept {
  const PlantParams& p = plant.params();
  return {0.0, 0.0, p.K * p.w0 * p.w0, 0.0, 0.0};
}

// x' = f(x) + g U.
inline Vec5 rhs(const State& x, const Input& u, const Plant& plant) {
  if (!std::isfinite(u.voltage)) {
    throw ValidationError("input: voltage must be finite");
  }
  Vec5 out = f_of(x, plant);
  const Vec5 g = g_of(plant);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += g[i] * u.voltage;
  }
  return out;
}

}  // namespace imfl

#endif  // IMFL_MODEL_HPP_
