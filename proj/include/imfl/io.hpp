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

// File artifacts: CSV trajectories/traces and JSON reports. Doubles are
// written in shortest round-trip decimal form, so CSV rows parse back to the
// exact bits that were simulated and re-runs of the same config produce
// byte-identical files. All writes go through write-then-rename; partial
// files are never left at the target path.

#ifndef IMFL_IO_HPP_
#define IMFL_IO_HPP_

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>

#include <json.hpp>

#include "imfl/config.hpp"
#include "imfl/controller.hpp"
#include "imfl/errors.hpp"
#include "imfl/sim.hpp"
#include "imfl/tune.hpp"
#include "imfl/verify.hpp"

namespace imfl::io {

using ordered_json = nlohmann::ordered_json;

// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void atomic_write(const std::filesystem::path& target,
                         std::string_view content) {
  namespace fs = std::filesystem;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ValidationError("cannot open for writing: " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw ValidationError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ValidationError("rename failed: " + target.string());
  }
}

inline std::string trajectory_csv(const SimResult& res) {
  std::string out = "t,x1,x2,x3,x4,x5,yd,e,u,v,saturated\n";
  for (const SimRow& r : res.rows) {
    out += format_double(r.t);
    out += ',';
    out += format_double(r.x1);
    out += ',';
    out += format_double(r.x2);
    out += ',';
    out += format_double(r.x3);
    out += ',';
    out += format_double(r.x4);
    out += ',';
    out += format_double(r.x5);
    out += ',';
    out += format_double(r.yd);
    out += ',';
    out += format_double(r.e);
    out += ',';
    out += format_double(r.u);
    out += ',';
    out += format_double(r.v);
    out += ',';
    out += r.saturated ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline std::string tune_trace_csv(const TuneResult& res) {
  std::string out = "eval,k1,k2,k3,k4,cost,best_cost\n";
  for (const TuneEval& ev : res.trace) {
    out += std::to_string(ev.index);
    out += ',';
    out += format_double(ev.gains.k1);
    out += ',';
    out += format_double(ev.gains.k2);
    out += ',';
    out += format_double(ev.gains.k3);
    out += ',';
    out += format_double(ev.gains.k4);
    out += ',';
    out += format_double(ev.cost);
    out += ',';
    out += format_double(ev.best_cost);
    out += '\n';
  }
  return out;
}

// JSON null for non-finite values (JSON has no inf).
inline ordered_json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline const char* mapping_name(GainMapping m) {
  return m == GainMapping::kDescending ? "descending" : "ascending";
}

inline ordered_json gains_json(const Gains& g) {
  return {{"k1", g.k1},
          {"k2", g.k2},
          {"k3", g.k3},
          {"k4", g.k4},
          {"mapping", mapping_name(g.mapping)}};
}

inline ordered_json routh_json(const RouthReport& r) {
  return {{"polynomial", {1.0, r.poly[0], r.poly[1], r.poly[2], r.poly[3]}},
          {"first_column",
           {r.first_column[0], r.first_column[1], r.first_column[2],
            r.first_column[3], r.first_column[4]}},
          {"verdict", to_string(r.verdict)},
          {"sign_changes", r.sign_changes}};
}

inline ordered_json profile_json(const Profile& p) {
  return std::visit(
      [](const auto& prof) -> ordered_json {
        using T = std::decay_t<decltype(prof)>;
        if constexpr (std::is_same_v<T, ConstantProfile>) {
          return {{"type", "constant"}, {"level", prof.level}};
        } else if constexpr (std::is_same_v<T, RampHoldProfile>) {
          return {{"type", "ramp_hold"},
                  {"start", prof.start},
                  {"end", prof.end},
                  {"t_ramp", prof.t_ramp}};
        } else {
          return {{"type", "smooth_step"},
                  {"start", prof.start},
                  {"end", prof.end},
                  {"t0", prof.t0},
                  {"t1", prof.t1}};
        }
      },
      p);
}

// Fully-expanded configuration: every default spelled out, so a run's
// assumptions are visible in its own artifacts.
inline ordered_json effective_config_json(const RunConfig& cfg) {
  ordered_json j;
  const PlantParams& p = cfg.plant;
  j["plant"] = {{"K", p.K},         {"D", p.D},
                {"w0", p.w0},       {"beta_s", p.beta_s},
                {"beta_c", p.beta_c}, {"R", p.R},
                {"L", p.L},         {"mu", p.mu},
                {"v_sp", p.v_sp},   {"v0", p.v0},
                {"u_limit", p.u_limit ? ordered_json(*p.u_limit)
                                      : ordered_json(nullptr)}};
  j["gains"] = cfg.gains ? gains_json(*cfg.gains) : ordered_json(nullptr);
  const SimConfig& s = cfg.sim;
  ordered_json sim;
  sim["x0"] = {s.x0.screw_pos, s.x0.drive_vel, s.x0.drive_accel,
               s.x0.screw_pressure, s.x0.cavity_pressure};
  sim["dt"] = s.dt;
  sim["t_end"] = s.t_end;
  sim["profile"] = profile_json(s.profile);
  if (s.control_mode == ControlMode::kContinuous) {
    sim["control_mode"] = "continuous";
  } else {
    sim["control_mode"] = {{"zoh", {{"sample_period", s.zoh_sample_period}}}};
  }
  if (!cfg.gains) sim["open_loop_u"] = s.open_loop_u;
  sim["log_stride"] = s.log_stride;
  sim["x1_floor"] = s.x1_floor;
  sim["divergence_limit"] = s.divergence_limit;
  j["sim"] = sim;
  if (cfg.tune) {
    const TuneSettings& t = *cfg.tune;
    ordered_json bounds = ordered_json::array();
    for (const GainBounds& b : t.bounds) bounds.push_back({b.lo, b.hi});
    j["tune"] = {{"method", t.method == TuneMethod::kNelderMead ? "nelder_mead"
                                                                : "grid"},
                 {"budget", t.budget},
                 {"grid_points", t.grid_points},
                 {"bounds", bounds},
                 {"weights",
                  {{"ise", t.w_ise}, {"settle", t.w_settle}, {"sat", t.w_sat}}}};
  }
  j["output_dir"] = cfg.output_dir;
  return j;
}

inline ordered_json metrics_json(const SimResult& res, const RunConfig& cfg) {
  ordered_json j;
  j["status"] = to_string(res.status);
  if (res.metrics) {
    const Metrics& m = *res.metrics;
    j["metrics"] = {{"settling_time_2pct", json_number(m.settling_time_2pct)},
                    {"overshoot_pct", m.overshoot_pct},
                    {"ise", m.ise},
                    {"iae", m.iae},
                    {"final_error", m.final_error}};
  } else {
    j["metrics"] = nullptr;
    j["t_abort"] = res.t_abort;
  }
  j["rows_logged"] = res.rows.size();
  j["assumed_defaults"] = cfg.assumed_defaults;
  j["effective_config"] = effective_config_json(cfg);
  return j;
}

inline ordered_json verification_json(const VerificationReport& r) {
  ordered_json j;
  j["pass"] = r.pass;
  j["num_states"] = r.num_states;
  j["seed"] = r.seed;
  j["relative_degree"] = {
      {"pass", r.rel_degree_pass},
      {"max_fd_lg_h_over_scale", r.max_abs_lg_fd[0]},
      {"max_fd_lg_lf_h_over_scale", r.max_abs_lg_fd[1]},
      {"max_fd_lg_lf2_h_over_scale", r.max_abs_lg_fd[2]},
      {"min_abs_lglf3", r.min_abs_lglf3},
      {"max_rel_err_lglf3", r.max_rel_err_lglf3}};
  ordered_json orders = ordered_json::array();
  const LieTolerances tol;
  for (std::size_t k = 0; k < 4; ++k) {
    orders.push_back({{"order", k + 1},
                      {"max_rel_err", r.max_rel_err_lie[k]},
                      {"tolerance", tol.fd_rel[k]},
                      {"pass", r.lie_pass[k]}});
  }
  j["lie_chain"] = orders;
  j["variant_forms"] = {
      {"note",
       "transcribed closed forms kept for comparison; the derived chain is "
       "authoritative and the fd oracle agrees with it"},
      {"lie4_max_rel_dev", r.variant_lie4_max_rel_dev},
      {"lie4_mean_rel_dev", r.variant_lie4_mean_rel_dev},
      {"lglf3_ratio_derived_over_variant_min", r.variant_lglf3_ratio_min},
      {"lglf3_ratio_derived_over_variant_max", r.variant_lglf3_ratio_max}};
  return j;
}

inline ordered_json best_gains_json(const TuneResult& res,
                                    const Gains& seed_gains) {
  ordered_json j;
  j["feasible"] = res.feasible;
  j["evaluations"] = res.evaluations;
  j["budget_exhausted"] = res.budget_exhausted;
  if (res.best) {
    j["best"] = gains_json(*res.best);
    j["best_cost"] = res.best_cost;
  } else {
    j["best"] = nullptr;
    j["best_cost"] = nullptr;
  }
  j["seed"] = gains_json(seed_gains);
  return j;
}

inline std::string dump_json(const ordered_json& j) {
  return j.dump(2) + "\n";
}

}  // namespace imfl::io

#endif  // IMFL_IO_HPP_
