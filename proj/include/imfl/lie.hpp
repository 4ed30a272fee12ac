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

// Lie-derivative chain of the output h(x) = x5 along the drift field f, and
// the input coefficient L_g L_f^3 h. The system has relative degree 4: the
// input reaches x5 only through x3 -> x2 -> x4 -> x5, so
//
//   L_g h = L_g L_f h = L_g L_f^2 h = 0   (structurally),
//   L_g L_f^3 h = -K w0^2 Q beta_s beta_c / (v0 x1)  != 0 for x1 > 0.
//
// Closed forms, with a = beta_s/x1, c = Q beta_c/v0, d = x4 - x5,
// w = x2 + Q d:
//
//   L_f h   = c d
//   L_f^2 h = c F,        F = -a w - c d           (= d' along f)
//   L_f^3 h = c G,        G = (a/x1) x2 w - a x3 - (aQ + c) F
//   L_f^4 h = c dG/dt     (gradient of G dotted with f; G depends on x only
//                          through x1, x2, x3 and d)
//
// Every link of the chain is checked against single-level central
// differences of the analytic order below it (fd_lie); nesting raw
// difference quotients four deep would amplify noise past usefulness.

#ifndef IMFL_LIE_HPP_
#define IMFL_LIE_HPP_

#include <array>
#include <cmath>
#include <cstddef>

#include "imfl/errors.hpp"
#include "imfl/model.hpp"

namespace imfl {

// Values of h, L_f h, ..., L_f^4 h and L_g L_f^3 h at one state.
struct LieChain {
  double lf0 = 0.0;
  double lf1 = 0.0;
  double lf2 = 0.0;
  double lf3 = 0.0;
  double lf4 = 0.0;
  double lglf3 = 0.0;
};

inline LieChain lie_chain(const State& x, const Plant& plant) {
  if (!(x.screw_pos > 0.0)) {
    throw SingularityError("lie_chain: x1 > 0 required");
  }
  const PlantParams& p = plant.params();
  const double x1 = x.screw_pos;
  const double x2 = x.drive_vel;
  const double x3 = x.drive_accel;
  const double q = plant.q();

  const double a = p.beta_s / x1;
  const double c = q * p.beta_c / p.v0;
  const double d = x.screw_pressure - x.cavity_pressure;
  const double w = x2 + q * d;
  const double aqc = a * q + c;

  const double F = -a * w - c * d;
  const double G = (a / x1) * x2 * w - a * x3 - aqc * F;

  // gradient of G in (x1, x2, x3, d); d' along f equals F
  const double dG_dx1 = (a / x1) * (-2.0 * x2 * w / x1 + x3 + q * F - aqc * w);
  const double dG_dx2 = (a / x1) * (w + x2) + aqc * a;
  const double dG_dx3 = -a;
  const double dG_dd = (a / x1) * x2 * q + aqc * aqc;

  const double f3 = -2.0 * p.D * p.w0 * x3 - p.w0 * p.w0 * x2;
  const double dG_dt = dG_dx1 * x2 + dG_dx2 * x3 + dG_dx3 * f3 + dG_dd * F;

  LieChain ch;
  ch.lf0 = x.cavity_pressure;
  ch.lf1 = c * d;
  ch.lf2 = c * F;
  ch.lf3 = c * G;
  ch.lf4 = c * dG_dt;
  ch.lglf3 = c * dG_dx3 * p.K * p.w0 * p.w0;
  return ch;
}

// k-th Lie derivative of h along f, k in 0..4.
inline double lie_f(const State& x, const Plant& plant, int order) {
  if (order < 0 || order > 4) {
    throw ValidationError("lie_f: order in 0..4");
  }
  const LieChain ch = lie_chain(x, plant);
  switch (order) {
    case 0: return ch.lf0;
    case 1: return ch.lf1;
    case 2: return ch.lf2;
    case 3: return ch.lf3;
    default: return ch.lf4;
  }
}

// Analytic L_g L_f^3 h = -K w0^2 Q beta_s beta_c / (v0 x1).
inline double lglf3(const State& x, const Plant& plant) {
  return lie_chain(x, plant).lglf3;
}

// Central-difference settings. Per-coordinate step h_i = step_rel *
// max(|x_i|, 1), never below step_abs_floor.
struct FdOptions {
  double step_rel = 1e-5;
  double step_abs_floor = 1e-8;
};

// Agreement tolerances between the analytic chain and the finite-difference
// oracle (relative; scale = max(|analytic|, 1)). One decade is surrendered
// per chain order.
struct LieTolerances {
  std::array<double, 4> fd_rel{1e-7, 1e-6, 1e-5, 1e-4};  // orders 1..4
  double lglf3_rel = 1e-6;
  double structural_zero = 1e-8;
};

namespace detail {

// Central-difference gradient of phi at x. Stencil points with x1 <= 0 make
// phi itself throw SingularityError.
template <class Phi>
Vec5 fd_gradient(const State& x, Phi&& phi, const FdOptions& opt) {
  const Vec5 base = x.to_vec();
  Vec5 grad{};
  for (std::size_t i = 0; i < base.size(); ++i) {
    double h = opt.step_rel * std::max(std::abs(base[i]), 1.0);
    h = std::max(h, opt.step_abs_floor);
    Vec5 vp = base, vm = base;
    vp[i] += h;
    vm[i] -= h;
    grad[i] = (phi(State::from_vec(vp)) - phi(State::from_vec(vm))) / (2.0 * h);
  }
  return grad;
}

inline double dot(const Vec5& a, const Vec5& b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Directional derivative of the analytic L_f^3 h along an arbitrary vector.
inline double fd_grad_lf3_dot(const State& x, const Plant& plant,
                              const Vec5& dir, const FdOptions& opt) {
  const Vec5 grad = fd_gradient(
      x, [&](const State& s) { return lie_chain(s, plant).lf3; }, opt);
  return dot(grad, dir);
}

}  // namespace detail

// Finite-difference estimate of L_f^order h, order in 1..4: gradient of the
// analytic order-1 form below it, dotted with f(x).
inline double fd_lie(const State& x, const Plant& plant, int order,
                     const FdOptions& opt = {}) {
  if (order < 1 || order > 4) {
    throw ValidationError("fd_lie: order in 1..4");
  }
  const Vec5 f = f_of(x, plant);
  const Vec5 grad = detail::fd_gradient(
      x, [&](const State& s) { return lie_f(s, plant, order - 1); }, opt);
  return detail::dot(grad, f);
}

// Finite-difference estimate of L_g L_f^3 h.
inline double fd_lglf3(const State& x, const Plant& plant,
                       const FdOptions& opt = {}) {
  return detail::fd_grad_lf3_dot(x, plant, g_of(plant), opt);
}

// Relative-degree evidence at one state: the three leading input
// coefficients vanish (analytically by structure, numerically below
// tolerance) and the fourth is bounded away from zero and agrees with the
// analytic form.
struct RelativeDegreeReport {
  std::array<double, 3> lg_analytic{0.0, 0.0, 0.0};  // structural zeros
  std::array<double, 3> lg_fd{};                     // fd confirmations
  double lglf3_analytic = 0.0;
  double lglf3_fd = 0.0;
  double scale = 0.0;  // max(1, |lglf3_analytic|)
  bool pass = false;
};

inline RelativeDegreeReport relative_degree_check(const State& x,
                                                  const Plant& plant,
                                                  const FdOptions& opt = {},
                                                  const LieTolerances& tol = {}) {
  RelativeDegreeReport r;
  const Vec5 g = g_of(plant);
  for (int k = 0; k < 3; ++k) {
    const Vec5 grad = detail::fd_gradient(
        x, [&](const State& s) { return lie_f(s, plant, k); }, opt);
    r.lg_fd[static_cast<std::size_t>(k)] = detail::dot(grad, g);
  }
  r.lglf3_analytic = lglf3(x, plant);
  r.lglf3_fd = fd_lglf3(x, plant, opt);
  r.scale = std::max(1.0, std::abs(r.lglf3_analytic));

  bool zeros_ok = true;
  for (double v : r.lg_fd) {
    zeros_ok = zeros_ok && std::abs(v) < tol.structural_zero * r.scale;
  }
  const bool nonzero_ok =
      std::abs(r.lglf3_analytic) > tol.structural_zero * r.scale &&
      std::abs(r.lglf3_fd - r.lglf3_analytic) <=
          tol.lglf3_rel * std::max(1.0, std::abs(r.lglf3_analytic));
  r.pass = zeros_ok && nonzero_ok;
  return r;
}

}  // namespace imfl

#endif  // IMFL_LIE_HPP_
