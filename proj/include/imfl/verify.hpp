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

// Numerical verification of the Lie-derivative algebra over a deterministic
// cloud of random states: relative-degree structure, analytic-vs-FD chain
// agreement, and the deviation of the transcribed variant forms from the
// derived ones. The state sampler draws raw mt19937 words (not
// std::uniform_real_distribution, whose output is implementation-defined) so
// reports are byte-stable across platforms.

#ifndef IMFL_VERIFY_HPP_
#define IMFL_VERIFY_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "imfl/lie.hpp"
#include "imfl/lie_variant.hpp"
#include "imfl/model.hpp"

namespace imfl {

struct VerifyOptions {
  int num_states = 100;
  unsigned seed = 20260808;
  double x1_lo = 0.1, x1_hi = 20.0;
  double vel_lo = -10.0, vel_hi = 10.0;
  double press_lo = 0.0, press_hi = 1000.0;
  FdOptions fd{};
  LieTolerances tol{};
};

namespace detail {

inline double draw_uniform(std::mt19937& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng()) * 0x1p-32);
}

}  // namespace detail

inline std::vector<State> sample_states(const VerifyOptions& opt) {
  std::mt19937 rng(opt.seed);
  std::vector<State> states;
  states.reserve(static_cast<std::size_t>(opt.num_states));
  for (int i = 0; i < opt.num_states; ++i) {
    State s;
    s.screw_pos = detail::draw_uniform(rng, opt.x1_lo, opt.x1_hi);
    s.drive_vel = detail::draw_uniform(rng, opt.vel_lo, opt.vel_hi);
    s.drive_accel = detail::draw_uniform(rng, opt.vel_lo, opt.vel_hi);
    s.screw_pressure = detail::draw_uniform(rng, opt.press_lo, opt.press_hi);
    s.cavity_pressure = detail::draw_uniform(rng, opt.press_lo, opt.press_hi);
    states.push_back(s);
  }
  return states;
}

struct VerificationReport {
  int num_states = 0;
  unsigned seed = 0;

  // relative degree
  bool rel_degree_pass = false;
  // worst |fd|/scale per structural zero, scale = max(1, |lglf3|)
  std::array<double, 3> max_abs_lg_fd{};
  double min_abs_lglf3 = 0.0;
  double max_rel_err_lglf3 = 0.0;

  // chain oracle, orders 1..4
  std::array<double, 4> max_rel_err_lie{};
  std::array<bool, 4> lie_pass{};

  // transcribed variants vs derived forms
  double variant_lie4_max_rel_dev = 0.0;
  double variant_lie4_mean_rel_dev = 0.0;
  double variant_lglf3_ratio_min = 0.0;  // derived / variant
  double variant_lglf3_ratio_max = 0.0;

  bool pass = false;
};

inline VerificationReport run_verification(const Plant& plant,
                                           const VerifyOptions& opt = {}) {
  VerificationReport rep;
  rep.num_states = opt.num_states;
  rep.seed = opt.seed;
  const std::vector<State> states = sample_states(opt);

  rep.min_abs_lglf3 = std::numeric_limits<double>::infinity();
  rep.variant_lglf3_ratio_min = std::numeric_limits<double>::infinity();
  rep.variant_lglf3_ratio_max = -std::numeric_limits<double>::infinity();
  bool rel_degree_ok = true;
  double dev_sum = 0.0;

  for (const State& x : states) {
    const RelativeDegreeReport rd =
        relative_degree_check(x, plant, opt.fd, opt.tol);
    rel_degree_ok = rel_degree_ok && rd.pass;
    for (std::size_t i = 0; i < 3; ++i) {
      rep.max_abs_lg_fd[i] =
          std::max(rep.max_abs_lg_fd[i], std::abs(rd.lg_fd[i]) / rd.scale);
    }
    rep.min_abs_lglf3 = std::min(rep.min_abs_lglf3, std::abs(rd.lglf3_analytic));
    rep.max_rel_err_lglf3 =
        std::max(rep.max_rel_err_lglf3,
                 std::abs(rd.lglf3_fd - rd.lglf3_analytic) /
                     std::max(1.0, std::abs(rd.lglf3_analytic)));

    const LieChain ch = lie_chain(x, plant);
    const std::array<double, 4> analytic{ch.lf1, ch.lf2, ch.lf3, ch.lf4};
    for (int k = 1; k <= 4; ++k) {
      const double fd = fd_lie(x, plant, k, opt.fd);
      const double rel = std::abs(fd - analytic[static_cast<std::size_t>(k - 1)]) /
                         std::max(1.0, std::abs(analytic[static_cast<std::size_t>(k - 1)]));
      rep.max_rel_err_lie[static_cast<std::size_t>(k - 1)] =
          std::max(rep.max_rel_err_lie[static_cast<std::size_t>(k - 1)], rel);
    }

    const double var4 = variant::lie4(x, plant);
    const double dev =
        std::abs(var4 - ch.lf4) / std::max(1.0, std::abs(ch.lf4));
    rep.variant_lie4_max_rel_dev = std::max(rep.variant_lie4_max_rel_dev, dev);
    dev_sum += dev;

    const double ratio = ch.lglf3 / variant::lglf3(x, plant);
    rep.variant_lglf3_ratio_min = std::min(rep.variant_lglf3_ratio_min, ratio);
    rep.variant_lglf3_ratio_max = std::max(rep.variant_lglf3_ratio_max, ratio);
  }

  rep.variant_lie4_mean_rel_dev =
      states.empty() ? 0.0 : dev_sum / static_cast<double>(states.size());
  rep.rel_degree_pass = rel_degree_ok;
  bool chain_ok = true;
  for (std::size_t k = 0; k < 4; ++k) {
    rep.lie_pass[k] = rep.max_rel_err_lie[k] <= opt.tol.fd_rel[k];
    chain_ok = chain_ok && rep.lie_pass[k];
  }
  rep.pass = rep.rel_degree_pass && chain_ok;
  return rep;
}

}  // namespace imfl

#endif  // IMFL_VERIFY_HPP_
