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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "imfl/integrate.hpp"
#include "imfl/lie.hpp"
#include "imfl/sim.hpp"

using namespace imfl;

namespace {

const Gains kAscending{0.7, 2.0, 30.0, 2.5, GainMapping::kAscending};
// quadruple pole at s = -2 under the ascending mapping
const Gains kFast{16.0, 32.0, 24.0, 8.0, GainMapping::kAscending};

bool rows_identical(const std::vector<SimRow>& a, const std::vector<SimRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const SimRow& p = a[i];
    const SimRow& q = b[i];
    if (p.t != q.t || p.x1 != q.x1 || p.x2 != q.x2 || p.x3 != q.x3 ||
        p.x4 != q.x4 || p.x5 != q.x5 || p.yd != q.yd || p.e != q.e ||
        p.u != q.u || p.v != q.v || p.saturated != q.saturated) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("scalar harness: one RK4 step of y' = -y from 1 at dt = 0.1") {
  const auto step =
      rk4<1>(0.0, {1.0}, 0.1, [](double, const std::array<double, 1>& y) {
        return std::array<double, 1>{-y[0]};
      });
  CHECK(step[0] == doctest::Approx(0.9048375).epsilon(1e-12));
}

TEST_CASE("scalar harness: global error shrinks ~16x when dt halves") {
  const auto run = [](double dt) {
    std::array<double, 1> y{1.0};
    const long n = std::lround(1.0 / dt);
    for (long i = 0; i < n; ++i) {
      y = rk4<1>(static_cast<double>(i) * dt, y, dt,
                 [](double, const std::array<double, 1>& s) {
                   return std::array<double, 1>{-s[0]};
                 });
    }
    return std::abs(y[0] - std::exp(-1.0));
  };
  const double e1 = run(0.1), e2 = run(0.05), e3 = run(0.025);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.2));
  CHECK(e2 / e3 == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("rk4_step leaves equilibria untouched to machine precision") {
  Plant plant;
  const State eq{7.0, 0.0, 0.0, 400.0, 400.0};
  const State next = rk4_step(eq, Input{0.0}, 1e-3, plant);
  CHECK(next.screw_pos == eq.screw_pos);
  CHECK(next.drive_vel == eq.drive_vel);
  CHECK(next.drive_accel == eq.drive_accel);
  CHECK(next.screw_pressure == eq.screw_pressure);
  CHECK(next.cavity_pressure == eq.cavity_pressure);
}

TEST_CASE("rk4_step propagates the stage singularity") {
  Plant plant;
  // one step would carry x1 = 1e-7 across zero at this velocity
  CHECK_THROWS_AS(
      rk4_step(State{1e-7, -1.0, 0.0, 0.0, 0.0}, Input{0.0}, 1e-3, plant),
      SingularityError);
  CHECK_THROWS_AS(
      rk4_step(State{1.0, 0.0, 0.0, 0.0, 0.0}, Input{0.0}, 0.0, plant),
      ValidationError);
}

TEST_CASE("open loop from equilibrium: every row equals the initial state") {
  Plant plant;
  SimConfig cfg;
  cfg.x0 = State{10.0, 0.0, 0.0, 400.0, 400.0};
  cfg.gains.reset();
  cfg.open_loop_u = 0.0;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.log_stride = 10;
  const SimResult res = simulate(cfg, plant);
  REQUIRE(res.status == SimStatus::kCompleted);
  for (const SimRow& r : res.rows) {
    CHECK(r.x1 == 10.0);
    CHECK(r.x2 == 0.0);
    CHECK(r.x3 == 0.0);
    CHECK(r.x4 == 400.0);
    CHECK(r.x5 == 400.0);
    CHECK(r.u == 0.0);
  }
}

TEST_CASE("simulation is deterministic: identical configs, identical bits") {
  Plant plant;
  SimConfig cfg;
  cfg.gains = kFast;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.log_stride = 7;
  const SimResult a = simulate(cfg, plant);
  const SimResult b = simulate(cfg, plant);
  REQUIRE(a.status == SimStatus::kCompleted);
  CHECK(a.status == b.status);
  CHECK(rows_identical(a.rows, b.rows));
}

TEST_CASE("zoh at the step period converges to the continuous loop") {
  // zoh holds the command between samples, so its trajectory approaches the
  // stage-evaluated continuous one as the sample period shrinks
  Plant plant;
  SimConfig cont;
  cont.gains = kFast;
  cont.dt = 1e-4;
  cont.t_end = 1.0;
  cont.log_stride = 100;
  const SimResult ref = simulate(cont, plant);
  REQUIRE(ref.status == SimStatus::kCompleted);

  const auto max_x5_gap = [&](double sample) {
    SimConfig zoh = cont;
    zoh.control_mode = ControlMode::kZoh;
    zoh.zoh_sample_period = sample;
    const SimResult res = simulate(zoh, plant);
    REQUIRE(res.status == SimStatus::kCompleted);
    REQUIRE(res.rows.size() == ref.rows.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
      worst = std::max(worst, std::abs(res.rows[i].x5 - ref.rows[i].x5));
    }
    return worst;
  };
  // the hold-induced gap shrinks roughly linearly with the sample period
  const double coarse = max_x5_gap(4e-3);
  const double mid = max_x5_gap(1e-3);
  const double fine = max_x5_gap(1e-4);
  CHECK(mid < coarse);
  CHECK(fine < mid);
  CHECK(fine / 400.0 < 5e-3);  // within 0.5% of the setpoint scale
}

TEST_CASE("zoh sample period must be an integer multiple of dt") {
  Plant plant;
  SimConfig cfg;
  cfg.gains = kFast;
  cfg.control_mode = ControlMode::kZoh;
  cfg.zoh_sample_period = 2.5e-4;
  cfg.dt = 1e-4;
  CHECK_NOTHROW(check_sim_config([&] {
    SimConfig ok = cfg;
    ok.zoh_sample_period = 3e-4;
    return ok;
  }()));
  CHECK_THROWS_AS(simulate(cfg, plant), ValidationError);
}

TEST_CASE("order-4 convergence of the stage-evaluated closed loop") {
  Plant plant;
  const auto run = [&](double dt, ControlMode mode) {
    SimConfig cfg;
    cfg.gains = kFast;
    cfg.control_mode = mode;
    if (mode == ControlMode::kZoh) cfg.zoh_sample_period = 5e-3;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    cfg.log_stride = std::lround(1.0 / dt);  // final row only
    const SimResult res = simulate(cfg, plant);
    REQUIRE(res.status == SimStatus::kCompleted);
    return res.rows.back();
  };
  const auto dist = [](const SimRow& p, const SimRow& q) {
    const double dx[5] = {p.x1 - q.x1, p.x2 - q.x2, p.x3 - q.x3, p.x4 - q.x4,
                          p.x5 - q.x5};
    double s = 0.0;
    for (double d : dx) s += d * d;
    return std::sqrt(s);
  };

  SUBCASE("continuous mode") {
    const SimRow a = run(1e-3, ControlMode::kContinuous);
    const SimRow b = run(5e-4, ControlMode::kContinuous);
    const SimRow c = run(2.5e-4, ControlMode::kContinuous);
    const double ratio = dist(a, b) / dist(b, c);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
  }
  SUBCASE("zoh mode with the switching grid held fixed") {
    const SimRow a = run(1e-3, ControlMode::kZoh);
    const SimRow b = run(5e-4, ControlMode::kZoh);
    const SimRow c = run(2.5e-4, ControlMode::kZoh);
    const double ratio = dist(a, b) / dist(b, c);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
  }
}

TEST_CASE("metrics: already settled trajectory") {
  std::vector<SimRow> rows;
  for (int i = 0; i <= 100; ++i) {
    SimRow r;
    r.t = 0.01 * i;
    r.x5 = 400.0;
    r.e = 0.0;
    rows.push_back(r);
  }
  const Metrics m = compute_metrics(rows, ConstantProfile{400.0});
  CHECK(m.settling_time_2pct == 0.0);
  CHECK(m.overshoot_pct == 0.0);
  CHECK(m.ise == 0.0);
  CHECK(m.final_error == 0.0);
}

TEST_CASE("metrics: exponential approach crosses the band at -ln(0.02)") {
  std::vector<SimRow> rows;
  const double dt = 1e-3;
  for (int i = 0; i <= 8000; ++i) {
    const double t = dt * i;
    SimRow r;
    r.t = t;
    r.x5 = 400.0 * (1.0 - std::exp(-t));
    r.yd = 400.0;
    r.e = r.x5 - 400.0;
    rows.push_back(r);
  }
  const Metrics m = compute_metrics(rows, ConstantProfile{400.0});
  CHECK(m.settling_time_2pct ==
        doctest::Approx(3.912023005428146).epsilon(1e-3));
  CHECK(m.overshoot_pct == 0.0);
}

TEST_CASE("metrics: constant error integrates to c^2 T") {
  std::vector<SimRow> rows;
  // c sits outside the 2% band of 400, so this trajectory never settles
  const double dt = 1e-2, c = 20.0, T = 5.0;
  for (int i = 0; i <= std::lround(T / dt); ++i) {
    SimRow r;
    r.t = dt * i;
    r.x5 = 400.0 + c;
    r.e = c;
    rows.push_back(r);
  }
  const Metrics m = compute_metrics(rows, ConstantProfile{400.0});
  CHECK(m.ise == doctest::Approx(c * c * T).epsilon(1e-9));
  CHECK(m.iae == doctest::Approx(c * T).epsilon(1e-9));
  CHECK(m.settling_time_2pct == std::numeric_limits<double>::infinity());
}

TEST_CASE("singularity abort is a status, not an exception") {
  Plant plant;
  SimConfig cfg;
  cfg.x0 = State{1e-3, -1.0, 0.0, 0.0, 0.0};  // screw crashes through floor
  cfg.gains.reset();
  cfg.dt = 1e-4;
  cfg.t_end = 1.0;
  const SimResult res = simulate(cfg, plant);
  CHECK(res.status == SimStatus::kSingularityAbort);
  CHECK_FALSE(res.metrics.has_value());
  CHECK(res.t_abort > 0.0);
}

TEST_CASE("divergence guard turns runaways into a status") {
  Plant plant;
  SimConfig cfg;
  cfg.gains = kFast;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.divergence_limit = 100.0;  // tight on purpose: x4 passes this early
  const SimResult res = simulate(cfg, plant);
  CHECK(res.status == SimStatus::kDiverged);
  CHECK_FALSE(res.metrics.has_value());
}

TEST_CASE("lie chain equals numerically differentiated open-loop output") {
  // Ties sim and lie together without fd_gradient: on a constant-input run,
  // y^(k) = L_f^k h for k = 1..3 and y'''' = L_f^4 h + (L_g L_f^3 h) u.
  Plant plant;
  const double u = 0.02;
  SimConfig cfg;
  cfg.gains.reset();
  cfg.open_loop_u = u;
  cfg.dt = 1e-4;
  cfg.t_end = 2.0;
  cfg.log_stride = 10;  // derivative grid h = 1e-3
  const SimResult res = simulate(cfg, plant);
  REQUIRE(res.status == SimStatus::kCompleted);

  // low orders on a 1 ms grid; orders 3-4 on a 5 ms grid, away from the
  // floating-point noise floor of the h^-4 quotient
  const double h = 1e-3;
  const std::size_t w = 5;
  const double hw = h * static_cast<double>(w);
  const auto& r = res.rows;
  for (std::size_t i = 600; i + 2 * w < r.size(); i += 200) {
    // skip the first 0.6 s so the w0-speed drive ringing has decayed
    const double d1 = (r[i + 1].x5 - r[i - 1].x5) / (2 * h);
    const double d2 = (r[i + 1].x5 - 2 * r[i].x5 + r[i - 1].x5) / (h * h);
    const double d3 = (r[i + 2 * w].x5 - 2 * r[i + w].x5 + 2 * r[i - w].x5 -
                       r[i - 2 * w].x5) /
                      (2 * hw * hw * hw);
    const double d4 = (r[i + 2 * w].x5 - 4 * r[i + w].x5 + 6 * r[i].x5 -
                       4 * r[i - w].x5 + r[i - 2 * w].x5) /
                      (hw * hw * hw * hw);
    const State x{r[i].x1, r[i].x2, r[i].x3, r[i].x4, r[i].x5};
    const LieChain ch = lie_chain(x, plant);
    CHECK(std::abs(d1 - ch.lf1) <= 1e-6 * std::max(1.0, std::abs(ch.lf1)));
    CHECK(std::abs(d2 - ch.lf2) <= 1e-5 * std::max(1.0, std::abs(ch.lf2)));
    CHECK(std::abs(d3 - ch.lf3) <= 1e-4 * std::max(1.0, std::abs(ch.lf3)));
    const double y4 = ch.lf4 + ch.lglf3 * u;
    CHECK(std::abs(d4 - y4) <= 1e-3 * std::max(1.0, std::abs(y4)));
  }
}

TEST_CASE("closed loop reproduces the predicted linear error dynamics") {
  // With exact cancellation the tracking error obeys
  // e'''' + a3 e''' + a2 e'' + a1 e' + a0 e = 0 with coefficients from the
  // gain mapping, regardless of the plant parameters.
  Plant plant;
  SimConfig cfg;
  cfg.gains = kAscending;  // (a3,a2,a1,a0) = (2.5, 30, 2, 0.7)
  cfg.dt = 1e-3;
  cfg.t_end = 30.0;
  cfg.log_stride = 100;
  const SimResult res = simulate(cfg, plant);
  REQUIRE(res.status == SimStatus::kCompleted);

  const auto poly = error_poly(*cfg.gains);
  std::array<double, 4> e{-400.0, 0.0, 0.0, 0.0};
  const auto err_rhs = [&](double, const std::array<double, 4>& s) {
    return std::array<double, 4>{
        s[1], s[2], s[3],
        -(poly[0] * s[3] + poly[1] * s[2] + poly[2] * s[1] + poly[3] * s[0])};
  };
  double worst = 0.0;
  std::size_t row = 0;
  const long n = std::lround(cfg.t_end / cfg.dt);
  for (long k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    if (row < res.rows.size() && res.rows[row].t == t) {
      worst = std::max(worst, std::abs(res.rows[row].e - e[0]));
      ++row;
    }
    if (k < n) e = rk4<4>(t, e, cfg.dt, err_rhs);
  }
  CHECK(row == res.rows.size());  // every logged instant was compared
  CHECK(worst <= 1e-3);           // on error values of order 400
}

TEST_CASE("config validation catches bad horizons and strides") {
  Plant plant;
  SimConfig cfg;
  cfg.dt = -1.0;
  CHECK_THROWS_AS(simulate(cfg, plant), ValidationError);
  cfg = SimConfig{};
  cfg.t_end = cfg.dt / 2.0;
  CHECK_THROWS_AS(simulate(cfg, plant), ValidationError);
  cfg = SimConfig{};
  cfg.log_stride = 0;
  CHECK_THROWS_AS(simulate(cfg, plant), ValidationError);
}
