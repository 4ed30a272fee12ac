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

// Feedback-linearising cavity-pressure control law
//
//   U = (v - L_f^4 h) / (L_g L_f^3 h),     y'''' = v,
//
// with the synthetic input v built from error derivatives reconstructed
// through the Lie chain (state feedback; the output signal is never
// differentiated numerically). The two plausible assignments of the four
// gains to error derivative orders differ in closed-loop stability, so the
// mapping is an explicit configuration enum with no default. Routh-Hurwitz
// analysis of the implied error polynomial
// s^4 + a3 s^3 + a2 s^2 + a1 s + a0 adjudicates between the two readings.

#ifndef IMFL_CONTROLLER_HPP_
#define IMFL_CONTROLLER_HPP_

#include <algorithm>
#include <array>
#include <cmath>

#include "imfl/errors.hpp"
#include "imfl/lie.hpp"
#include "imfl/model.hpp"
#include "imfl/reference.hpp"

namespace imfl {

// Gain-to-error-derivative-order assignment:
//   kDescending:  v = yd'''' - k1 e''' - k2 e'' - k3 e' - k4 e
//   kAscending:   v = yd'''' - k4 e''' - k3 e'' - k2 e' - k1 e
enum class GainMapping { kDescending, kAscending };

struct Gains {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;
  GainMapping mapping = GainMapping::kAscending;
};

inline void check_gains(const Gains& g) {
  if (!(std::isfinite(g.k1) && std::isfinite(g.k2) && std::isfinite(g.k3) &&
        std::isfinite(g.k4))) {
    throw ValidationError("gains: k1..k4 must be finite");
  }
}

// (a3, a2, a1, a0) of the closed-loop error polynomial implied by the
// mapping.
inline std::array<double, 4> error_poly(const Gains& g) noexcept {
  if (g.mapping == GainMapping::kDescending) {
    return {g.k1, g.k2, g.k3, g.k4};
  }
  return {g.k4, g.k3, g.k2, g.k1};
}

// (e, e', e'', e''') with e^(k) = L_f^k h(x) - yd^(k).
struct ErrorDerivs {
  double e = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
};

inline ErrorDerivs error_derivatives(const State& x, const ReferenceSample& ref,
                                     const Plant& plant) {
  const LieChain ch = lie_chain(x, plant);
  return {ch.lf0 - ref.yd, ch.lf1 - ref.yd1, ch.lf2 - ref.yd2,
          ch.lf3 - ref.yd3};
}

inline double synthetic_input(const ErrorDerivs& e, double ydddd,
                              const Gains& g) {
  if (g.mapping == GainMapping::kDescending) {
    return ydddd - g.k1 * e.e3 - g.k2 * e.e2 - g.k3 * e.e1 - g.k4 * e.e;
  }
  return ydddd - g.k4 * e.e3 - g.k3 * e.e2 - g.k2 * e.e1 - g.k1 * e.e;
}

struct ControlDecision {
  double u = 0.0;        // voltage command, after any clamping
  double v = 0.0;        // synthetic input
  ErrorDerivs e{};       // error derivatives used
  bool saturated = false;
};

// |L_g L_f^3 h| below this fraction of its x1 = 1 magnitude counts as a
// degenerate decoupling term.
inline constexpr double kDecoupleEps = 1e-12;

inline ControlDecision control_law(const State& x, const ReferenceSample& ref,
                                   const Gains& g, const Plant& plant) {
  check_gains(g);
  const LieChain ch = lie_chain(x, plant);
  ControlDecision out;
  out.e = {ch.lf0 - ref.yd, ch.lf1 - ref.yd1, ch.lf2 - ref.yd2,
           ch.lf3 - ref.yd3};
  out.v = synthetic_input(out.e, ref.yd4, g);

  const PlantParams& p = plant.params();
  const double decouple_scale =
      p.K * p.w0 * p.w0 * plant.q() * p.beta_s * p.beta_c / p.v0;
  if (!(std::abs(ch.lglf3) >= kDecoupleEps * decouple_scale)) {
    throw DegenerateDecouplingError("control_law: |L_g L_f^3 h| below epsilon");
  }
  double u = (out.v - ch.lf4) / ch.lglf3;
  if (!std::isfinite(u)) {
    throw DegenerateDecouplingError("control_law: non-finite voltage command");
  }
  if (p.u_limit) {
    const double lim = *p.u_limit;
    const double clamped = std::clamp(u, -lim, lim);
    out.saturated = clamped != u;
    u = clamped;
  }
  out.u = u;
  return out;
}

enum class StabilityVerdict { kStable, kUnstable, kMarginal };

inline const char* to_string(StabilityVerdict v) noexcept {
  switch (v) {
    case StabilityVerdict::kStable: return "stable";
    case StabilityVerdict::kUnstable: return "unstable";
    default: return "marginal";
  }
}

struct RouthReport {
  std::array<double, 4> poly{};          // a3, a2, a1, a0
  std::array<double, 5> first_column{};  // 1, a3, b1, c1, a0
  StabilityVerdict verdict = StabilityVerdict::kMarginal;
  int sign_changes = 0;  // right-half-plane root count when defined
};

// Routh-Hurwitz test of s^4 + a3 s^3 + a2 s^2 + a1 s + a0 built from the
// gains under their mapping. A pivot that is exactly zero yields kMarginal;
// no epsilon substitution is attempted.
inline RouthReport routh_hurwitz(const Gains& g) {
  check_gains(g);
  RouthReport r;
  r.poly = error_poly(g);
  const double a3 = r.poly[0], a2 = r.poly[1], a1 = r.poly[2], a0 = r.poly[3];
  r.first_column[0] = 1.0;
  r.first_column[1] = a3;
  if (a3 == 0.0) {
    r.verdict = StabilityVerdict::kMarginal;
    return r;
  }
  const double b1 = (a3 * a2 - a1) / a3;
  r.first_column[2] = b1;
  if (b1 == 0.0) {
    r.verdict = StabilityVerdict::kMarginal;
    return r;
  }
  const double c1 = (b1 * a1 - a3 * a0) / b1;
  r.first_column[3] = c1;
  r.first_column[4] = a0;
  if (c1 == 0.0 || a0 == 0.0) {
    r.verdict = StabilityVerdict::kMarginal;
    return r;
  }
  int changes = 0;
  for (std::size_t i = 1; i < r.first_column.size(); ++i) {
    if ((r.first_column[i - 1] > 0.0) != (r.first_column[i] > 0.0)) {
      ++changes;
    }
  }
  r.sign_changes = changes;
  r.verdict =
      changes == 0 ? StabilityVerdict::kStable : StabilityVerdict::kUnstable;
  return r;
}

}  // namespace imfl

#endif  // IMFL_CONTROLLER_HPP_
