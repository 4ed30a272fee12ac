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

// Hand-expanded variants of L_f^4 h and L_g L_f^3 h, kept verbatim as a
// cross-check target. They carry transcription defects: most visibly, the
// input coefficient misses a -Q beta_c / v0 factor relative to the derived
// chain in lie.hpp, which the finite-difference oracle confirms. They are
// never used for control; verification reports quantify how far they sit
// from the derived forms.

#ifndef IMFL_LIE_VARIANT_HPP_
#define IMFL_LIE_VARIANT_HPP_

#include "imfl/errors.hpp"
#include "imfl/model.hpp"

namespace imfl::variant {

inline double lglf3(const State& x, const Plant& plant) {
  if (!(x.screw_pos > 0.0)) {
    throw SingularityError("variant::lglf3: x1 > 0 required");
  }
  const PlantParams& p = plant.params();
  return p.K * p.beta_s * p.w0 * p.w0 / x.screw_pos;
}

inline double lie4(const State& x, const Plant& plant) {
  if (!(x.screw_pos > 0.0)) {
    throw SingularityError("variant::lie4: x1 > 0 required");
  }
  const PlantParams& p = plant.params();
  const double q = plant.q();
  const double x1 = x.screw_pos;
  const double x2 = x.drive_vel;
  const double x3 = x.drive_accel;
  const double x4 = x.screw_pressure;
  const double x5 = x.cavity_pressure;
  const double bs = p.beta_s;
  const double bc = p.beta_c;
  const double v0 = p.v0;

  const double q2 = q * q, q3 = q2 * q, q4 = q3 * q;
  const double bs2 = bs * bs, bs3 = bs2 * bs;
  const double bc2 = bc * bc, bc3 = bc2 * bc, bc4 = bc3 * bc;
  const double v02 = v0 * v0, v03 = v02 * v0, v04 = v03 * v0;
  const double x1_2 = x1 * x1, x1_3 = x1_2 * x1;
  const double dp = x4 - x5;

  const double t1 = (q2 * bs2 / v0) * (x3 / x1_2 - 2.0 * x2 * x2 / x1_3);
  const double t2 = (q3 * bs3 * bc / (v0 * x1_3) +
                     (q2 * bs2 * bc / (v02 * x1_3)) * x2 +
                     (q3 * bc2 * bs2 / (v02 * x1_2)) * x2 +
                     q3 * bc3 * bs / (v03 * x1)) *
                    (-x2 - q * dp);
  const double t3 = (2.0 * q3 * bs2 * bc / (v0 * x1_3) +
                     q3 * bc2 * bs / (v02 * x1_2)) *
                    (x2 * x5 - x4 * x2);
  const double t4 = -(q4 * bs3 * bc2 / (v02 * x1_2) +
                      q4 * bc3 * bs / (v03 * x1) - q4 * bc4 / v04) *
                    dp;
  const double t5 = (q2 * bs * bc / (v02 * x1_2)) * (x4 * x3 - x2 * x2 * x4 / x1);
  const double t6 = (q2 * bc2 * bs / (v02 * x1)) * (x3 - x2 * x2 / x1);
  const double t7 = -(bs / x1) * (-2.0 * p.D * p.w0 * x3 - p.w0 * p.w0 * x2 -
                                  x2 * x3 / x1 + 2.0 * x2 * x3 / x1 -
                                  x2 * x2 * x2 / x1_2);
  return t1 + t2 + t3 + t4 + t5 + t6 + t7;
}

}  // namespace imfl::variant

#endif  // IMFL_LIE_VARIANT_HPP_
