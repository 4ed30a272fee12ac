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

// Derivative-free gain search against a simulation cost. Candidates are
// Routh-filtered first: simulating an unstable loop wastes most of the
// budget, so unstable (or marginal) gain sets receive a large finite penalty
// without simulating. The search runs in log-gain space because plausible
// gains span decades. Everything is deterministic: identical configs give
// identical traces.

#ifndef IMFL_TUNE_HPP_
#define IMFL_TUNE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "imfl/controller.hpp"
#include "imfl/errors.hpp"
#include "imfl/sim.hpp"

namespace imfl {

enum class TuneMethod { kNelderMead, kGrid };

struct GainBounds {
  double lo = 1e-3;
  double hi = 1e3;
};

struct TuneConfig {
  SimConfig scenario{};    // gains field is replaced per candidate
  Gains initial_gains{};   // seed; its mapping applies to every candidate
  TuneMethod method = TuneMethod::kNelderMead;
  std::array<GainBounds, 4> bounds{};
  int budget = 500;        // max objective evaluations
  double w_ise = 1.0;
  double w_settle = 1.0;
  double w_sat = 0.0;
  int grid_points = 5;     // per axis, GRID only
};

inline void check_tune_config(const TuneConfig& cfg) {
  check_sim_config(cfg.scenario);
  check_gains(cfg.initial_gains);
  for (const GainBounds& b : cfg.bounds) {
    if (!(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo > 0.0 &&
          b.lo < b.hi)) {
      throw ValidationError("tune.bounds: 0 < min < max per gain");
    }
  }
  if (cfg.budget < 1) throw ValidationError("tune.budget: >= 1");
  if (!(cfg.w_ise >= 0.0 && cfg.w_settle >= 0.0 && cfg.w_sat >= 0.0)) {
    throw ValidationError("tune.weights: >= 0");
  }
  if (!(cfg.w_ise > 0.0 || cfg.w_settle > 0.0 || cfg.w_sat > 0.0)) {
    throw ValidationError("tune.weights: at least one positive");
  }
  if (cfg.method == TuneMethod::kGrid && cfg.grid_points < 2) {
    throw ValidationError("tune.grid_points: >= 2");
  }
}

inline constexpr double kTunePenaltyBase = 1e9;
inline constexpr double kTunePenaltyAborted = 1e6;

namespace detail {

struct ObjectiveOutcome {
  double cost = 0.0;
  bool feasible = false;  // Routh-stable and the simulation completed
};

// Composite cost. Routh-unstable candidates: kTunePenaltyBase plus the
// summed negativity of the Routh first column. Diverged/aborted runs:
// kTunePenaltyBase + kTunePenaltyAborted. Stable completed runs:
// w_ise*ise + w_settle*settle + w_sat*(saturated row fraction), with a
// never-settling run charged the full horizon so non-settling candidates
// stay comparable through their ise share.
inline ObjectiveOutcome evaluate_objective(const Gains& g,
                                           const TuneConfig& cfg,
                                           const Plant& plant) {
  const RouthReport rr = routh_hurwitz(g);
  if (rr.verdict != StabilityVerdict::kStable) {
    double distance = 0.0;
    for (double c : rr.first_column) distance += std::max(0.0, -c);
    return {kTunePenaltyBase + distance, false};
  }
  SimConfig sc = cfg.scenario;
  sc.gains = g;
  const SimResult res = simulate(sc, plant);
  if (res.status != SimStatus::kCompleted || !res.metrics) {
    return {kTunePenaltyBase + kTunePenaltyAborted, false};
  }
  const Metrics& m = *res.metrics;
  const double settle = std::isfinite(m.settling_time_2pct)
                            ? m.settling_time_2pct
                            : sc.t_end;
  double sat_rows = 0.0;
  for (const SimRow& r : res.rows) sat_rows += r.saturated ? 1.0 : 0.0;
  const double sat_frac =
      res.rows.empty() ? 0.0 : sat_rows / static_cast<double>(res.rows.size());
  return {cfg.w_ise * m.ise + cfg.w_settle * settle + cfg.w_sat * sat_frac,
          true};
}

}  // namespace detail

inline double objective(const Gains& g, const TuneConfig& cfg,
                        const Plant& plant) {
  return detail::evaluate_objective(g, cfg, plant).cost;
}

struct TuneEval {
  int index = 0;
  Gains gains{};
  double cost = 0.0;
  double best_cost = 0.0;  // best seen through this evaluation
};

struct TuneResult {
  bool feasible = false;  // a Routh-stable, completed candidate was found
  std::optional<Gains> best{};  // cheapest feasible candidate
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<TuneEval> trace;  // best_cost column tracks all evaluations
  bool budget_exhausted = false;
  int evaluations = 0;
};

namespace detail {

using LogPoint = std::array<double, 4>;

inline LogPoint project(const LogPoint& z, const std::array<GainBounds, 4>& b) {
  LogPoint out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = std::clamp(z[i], std::log(b[i].lo), std::log(b[i].hi));
  }
  return out;
}

inline Gains to_gains(const LogPoint& z, GainMapping mapping) {
  return {std::exp(z[0]), std::exp(z[1]), std::exp(z[2]), std::exp(z[3]),
          mapping};
}

class Recorder {
 public:
  Recorder(const TuneConfig& cfg, const Plant& plant, TuneResult& out)
      : cfg_(cfg), plant_(plant), out_(out) {}

  bool budget_left() const {
    return out_.evaluations < cfg_.budget;
  }

  // Evaluates a projected log-point; returns the cost.
  double operator()(const LogPoint& z) {
    const Gains g = to_gains(z, cfg_.initial_gains.mapping);
    const ObjectiveOutcome res = evaluate_objective(g, cfg_, plant_);
    ++out_.evaluations;
    running_min_ = std::min(running_min_, res.cost);
    if (res.feasible && res.cost < out_.best_cost) {
      out_.best_cost = res.cost;
      out_.best = g;
      out_.feasible = true;
    }
    out_.trace.push_back({out_.evaluations, g, res.cost, running_min_});
    return res.cost;
  }

 private:
  const TuneConfig& cfg_;
  const Plant& plant_;
  TuneResult& out_;
  double running_min_ = std::numeric_limits<double>::infinity();
};

inline void nelder_mead(const TuneConfig& cfg, Recorder& eval,
                        TuneResult& out) {
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;
  constexpr std::size_t kDim = 4;
  constexpr std::size_t kVerts = kDim + 1;

  LogPoint seed{std::log(cfg.initial_gains.k1), std::log(cfg.initial_gains.k2),
                std::log(cfg.initial_gains.k3), std::log(cfg.initial_gains.k4)};
  seed = project(seed, cfg.bounds);

  std::array<LogPoint, kVerts> verts;
  std::array<double, kVerts> costs;
  verts[0] = seed;
  const double h = std::log(1.1);  // +10% per-coordinate perturbation
  for (std::size_t i = 0; i < kDim; ++i) {
    LogPoint v = seed;
    v[i] += h;
    verts[i + 1] = project(v, cfg.bounds);
  }
  for (std::size_t i = 0; i < kVerts; ++i) {
    if (!eval.budget_left()) {
      out.budget_exhausted = true;
      return;
    }
    costs[i] = eval(verts[i]);
  }

  std::array<std::size_t, kVerts> order{};
  while (true) {
    for (std::size_t i = 0; i < kVerts; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return costs[a] < costs[b];
                     });
    const std::size_t best = order[0];
    const std::size_t second_worst = order[kVerts - 2];
    const std::size_t worst = order[kVerts - 1];

    if (costs[worst] - costs[best] <=
        1e-12 * std::max(1.0, std::abs(costs[best]))) {
      return;  // simplex collapsed
    }

    LogPoint centroid{};
    for (std::size_t i = 0; i < kVerts; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < kDim; ++j) centroid[j] += verts[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(kDim);

    const auto along = [&](double coef) {
      LogPoint p;
      for (std::size_t j = 0; j < kDim; ++j) {
        p[j] = centroid[j] + coef * (centroid[j] - verts[worst][j]);
      }
      return project(p, cfg.bounds);
    };

    if (!eval.budget_left()) {
      out.budget_exhausted = true;
      return;
    }
    const LogPoint xr = along(kReflect);
    const double fr = eval(xr);

    if (fr < costs[best]) {
      if (!eval.budget_left()) {
        out.budget_exhausted = true;
        return;
      }
      const LogPoint xe = along(kExpand);
      const double fe = eval(xe);
      if (fe < fr) {
        verts[worst] = xe;
        costs[worst] = fe;
      } else {
        verts[worst] = xr;
        costs[worst] = fr;
      }
    } else if (fr < costs[second_worst]) {
      verts[worst] = xr;
      costs[worst] = fr;
    } else {
      if (!eval.budget_left()) {
        out.budget_exhausted = true;
        return;
      }
      const bool outside = fr < costs[worst];
      const LogPoint xc = along(outside ? kContract : -kContract);
      const double fc = eval(xc);
      if (fc < (outside ? fr : costs[worst])) {
        verts[worst] = xc;
        costs[worst] = fc;
      } else {
        // shrink toward the best vertex
        for (std::size_t i = 0; i < kVerts; ++i) {
          if (i == best) continue;
          LogPoint p;
          for (std::size_t j = 0; j < kDim; ++j) {
            p[j] = verts[best][j] + kShrink * (verts[i][j] - verts[best][j]);
          }
          verts[i] = project(p, cfg.bounds);
          if (!eval.budget_left()) {
            out.budget_exhausted = true;
            return;
          }
          costs[i] = eval(verts[i]);
        }
      }
    }
  }
}

inline void grid_search(const TuneConfig& cfg, Recorder& eval,
                        TuneResult& out) {
  const int n = cfg.grid_points;
  std::array<std::vector<double>, 4> axes;
  for (std::size_t i = 0; i < 4; ++i) {
    const double zlo = std::log(cfg.bounds[i].lo);
    const double zhi = std::log(cfg.bounds[i].hi);
    for (int j = 0; j < n; ++j) {
      axes[i].push_back(zlo + (zhi - zlo) * j / static_cast<double>(n - 1));
    }
  }
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      for (int i3 = 0; i3 < n; ++i3) {
        for (int i4 = 0; i4 < n; ++i4) {
          if (!eval.budget_left()) {
            out.budget_exhausted = true;
            return;
          }
          eval({axes[0][static_cast<std::size_t>(i1)],
                axes[1][static_cast<std::size_t>(i2)],
                axes[2][static_cast<std::size_t>(i3)],
                axes[3][static_cast<std::size_t>(i4)]});
        }
      }
    }
  }
}

}  // namespace detail

// Runs the configured search. A run in which every candidate was penalised
// (no stable, completed simulation) comes back with feasible = false and no
// best gains; an unstable "best" is never returned.
inline TuneResult tune(const TuneConfig& cfg, const Plant& plant) {
  check_tune_config(cfg);
  for (std::size_t i = 0; i < 4; ++i) {
    const double k = std::array{cfg.initial_gains.k1, cfg.initial_gains.k2,
                                cfg.initial_gains.k3, cfg.initial_gains.k4}[i];
    if (!(k > 0.0)) {
      throw ValidationError("tune.initial_gains: gains must be positive for "
                            "log-space search");
    }
  }
  TuneResult out;
  detail::Recorder eval(cfg, plant, out);
  if (cfg.method == TuneMethod::kNelderMead) {
    detail::nelder_mead(cfg, eval, out);
  } else {
    detail::grid_search(cfg, eval, out);
  }
  return out;
}

}  // namespace imfl

#endif  // IMFL_TUNE_HPP_
