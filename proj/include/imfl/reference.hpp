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

// Target cavity-pressure trajectories with analytic time derivatives through
// order 4 (the synthetic input needs yd''''). SMOOTH_STEP uses the degree-9
// C4 blend so all four derivatives exist and vanish at both ends; RAMP_HOLD
// has a genuine corner and is flagged as not C4.

#ifndef IMFL_REFERENCE_HPP_
#define IMFL_REFERENCE_HPP_

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "imfl/errors.hpp"

namespace imfl {

// Reference value and its first four time derivatives at one query time.
struct ReferenceSample {
  double yd = 0.0;
  double yd1 = 0.0;
  double yd2 = 0.0;
  double yd3 = 0.0;
  double yd4 = 0.0;
};

struct ConstantProfile {
  double level = 400.0;
};

// Linear rise from start to end over [0, t_ramp], then hold. One-sided
// derivative values at the corner (hold side at t >= t_ramp).
struct RampHoldProfile {
  double start = 0.0;
  double end = 400.0;
  double t_ramp = 1.0;
};

// C4 polynomial blend from start to end over [t0, t1].
struct SmoothStepProfile {
  double start = 0.0;
  double end = 400.0;
  double t0 = 0.0;
  double t1 = 1.0;
};

using Profile = std::variant<ConstantProfile, RampHoldProfile, SmoothStepProfile>;

namespace detail {

// Degree-9 blend s(tau) = 126 t^5 - 420 t^6 + 540 t^7 - 315 t^8 + 70 t^9,
// with s(0)=0, s(1)=1 and s'..s'''' zero at both ends. Derivatives in their
// factored forms.
inline double blend0(double t) noexcept {
  return t * t * t * t * t *
         (126.0 + t * (-420.0 + t * (540.0 + t * (-315.0 + t * 70.0))));
}
inline double blend1(double t) noexcept {
  const double u = t * (1.0 - t);
  return 630.0 * u * u * u * u;
}
inline double blend2(double t) noexcept {
  const double u = t * (1.0 - t);
  return 2520.0 * u * u * u * (1.0 - 2.0 * t);
}
inline double blend3(double t) noexcept {
  const double u = t * (1.0 - t);
  return 2520.0 * u * u * (3.0 + t * (-14.0 + 14.0 * t));
}
inline double blend4(double t) noexcept {
  const double u = t * (1.0 - t);
  return 15120.0 * u * (1.0 + t * (-9.0 + t * (21.0 - 14.0 * t)));
}

}  // namespace detail

inline void check_profile(const Profile& p) {
  std::visit(
      [](const auto& prof) {
        using T = std::decay_t<decltype(prof)>;
        if constexpr (std::is_same_v<T, ConstantProfile>) {
          if (!std::isfinite(prof.level)) {
            throw ValidationError("profile.level: finite");
          }
        } else if constexpr (std::is_same_v<T, RampHoldProfile>) {
          if (!std::isfinite(prof.start) || !std::isfinite(prof.end)) {
            throw ValidationError("profile.start/end: finite");
          }
          if (!(std::isfinite(prof.t_ramp) && prof.t_ramp > 0.0)) {
            throw ValidationError("profile.t_ramp: t_ramp > 0");
          }
        } else {
          if (!std::isfinite(prof.start) || !std::isfinite(prof.end)) {
            throw ValidationError("profile.start/end: finite");
          }
          if (!(std::isfinite(prof.t0) && std::isfinite(prof.t1) &&
                prof.t1 > prof.t0)) {
            throw ValidationError("profile.t0/t1: t1 > t0");
          }
        }
      },
      p);
}

inline ReferenceSample eval_profile(const Profile& p, double t) {
  if (!(t >= 0.0)) {
    throw ValidationError("eval_profile: t >= 0");
  }
  return std::visit(
      [t](const auto& prof) -> ReferenceSample {
        using T = std::decay_t<decltype(prof)>;
        if constexpr (std::is_same_v<T, ConstantProfile>) {
          return {prof.level, 0.0, 0.0, 0.0, 0.0};
        } else if constexpr (std::is_same_v<T, RampHoldProfile>) {
          if (t >= prof.t_ramp) {
            return {prof.end, 0.0, 0.0, 0.0, 0.0};
          }
          const double slope = (prof.end - prof.start) / prof.t_ramp;
          return {prof.start + slope * t, slope, 0.0, 0.0, 0.0};
        } else {
          if (t <= prof.t0) {
            return {prof.start, 0.0, 0.0, 0.0, 0.0};
          }
          if (t >= prof.t1) {
            return {prof.end, 0.0, 0.0, 0.0, 0.0};
          }
          const double span = prof.t1 - prof.t0;
          const double tau = (t - prof.t0) / span;
          const double amp = prof.end - prof.start;
          const double s1 = span, s2 = span * span, s3 = s2 * span, s4 = s3 * span;
          return {prof.start + amp * detail::blend0(tau),
                  amp * detail::blend1(tau) / s1,
                  amp * detail::blend2(tau) / s2,
                  amp * detail::blend3(tau) / s3,
                  amp * detail::blend4(tau) / s4};
        }
      },
      p);
}

// Result of validating a profile: invariants plus a numeric
// derivative-consistency sweep (central differences of channel k-1 vs
// channel k, relative tolerance 1e-4, scale = max(|value|, 1)).
struct ProfileReport {
  bool pass = false;
  bool c4 = true;  // false for profiles whose derivatives jump (RAMP_HOLD)
  double max_rel_fd_err = 0.0;
  std::vector<std::string> notes;
};

namespace detail {

inline double profile_channel(const Profile& p, double t, int k) {
  const ReferenceSample s = eval_profile(p, t);
  switch (k) {
    case 0: return s.yd;
    case 1: return s.yd1;
    case 2: return s.yd2;
    case 3: return s.yd3;
    default: return s.yd4;
  }
}

}  // namespace detail

inline ProfileReport validate_profile(const Profile& p,
                                      int samples = 50,
                                      double tolerance = 1e-4) {
  check_profile(p);
  ProfileReport rep;
  rep.c4 = !std::holds_alternative<RampHoldProfile>(p);
  if (!rep.c4) {
    rep.notes.push_back(
        "ramp_hold is not C4: yd1 jumps at the corner, so the synthetic "
        "input steps discontinuously there");
  }

  // Pick a window that covers the interesting part of each variant.
  double t_lo = 0.0, t_hi = 1.0;
  double corner = -1.0;
  if (const auto* ramp = std::get_if<RampHoldProfile>(&p)) {
    t_hi = 2.0 * ramp->t_ramp;
    corner = ramp->t_ramp;
  } else if (const auto* ss = std::get_if<SmoothStepProfile>(&p)) {
    t_lo = std::max(0.0, ss->t0 - 0.25 * (ss->t1 - ss->t0));
    t_hi = ss->t1 + 0.25 * (ss->t1 - ss->t0);
  }

  const double fd_h = 1e-6 * std::max(1.0, t_hi);
  for (int i = 0; i < samples; ++i) {
    const double t = t_lo + (t_hi - t_lo) * (i + 0.5) / samples;
    if (t - fd_h < 0.0) continue;
    if (corner > 0.0 && std::abs(t - corner) < 4.0 * fd_h) continue;
    for (int k = 1; k <= 4; ++k) {
      const double fd = (detail::profile_channel(p, t + fd_h, k - 1) -
                         detail::profile_channel(p, t - fd_h, k - 1)) /
                        (2.0 * fd_h);
      const double ref = detail::profile_channel(p, t, k);
      const double rel = std::abs(fd - ref) / std::max(std::abs(ref), 1.0);
      rep.max_rel_fd_err = std::max(rep.max_rel_fd_err, rel);
    }
  }
  rep.pass = rep.max_rel_fd_err <= tolerance;
  if (!rep.pass) {
    rep.notes.push_back("derivative consistency sweep exceeded tolerance");
  }
  return rep;
}

}  // namespace imfl

#endif  // IMFL_REFERENCE_HPP_
