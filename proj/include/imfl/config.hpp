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

// Strict JSON run configuration. Unknown keys are rejected anywhere in the
// document (a typo in a gain name must not silently fall back to a default),
// and every omitted optional field is filled from documented defaults and
// recorded in assumed_defaults so runs can echo their assumptions.
//
// gains.mapping is deliberately required, never defaulted: the two readings
// differ in closed-loop stability.

#ifndef IMFL_CONFIG_HPP_
#define IMFL_CONFIG_HPP_

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "imfl/controller.hpp"
#include "imfl/errors.hpp"
#include "imfl/model.hpp"
#include "imfl/sim.hpp"
#include "imfl/tune.hpp"

namespace imfl {

// Search settings from the config's tune block; the full TuneConfig is
// assembled against the sim scenario on demand.
struct TuneSettings {
  TuneMethod method = TuneMethod::kNelderMead;
  std::array<GainBounds, 4> bounds{};
  int budget = 500;
  double w_ise = 1.0;
  double w_settle = 1.0;
  double w_sat = 0.0;
  int grid_points = 5;
};

struct RunConfig {
  PlantParams plant{};
  std::optional<Gains> gains{};
  SimConfig sim{};  // sim.gains mirrors the gains block
  std::optional<TuneSettings> tune{};
  std::string output_dir = "out";
  std::vector<std::string> assumed_defaults;  // dotted paths of filled defaults
};

namespace config_detail {

using nlohmann::json;

class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path,
               std::vector<std::string>* assumed)
      : obj_(j), path_(std::move(path)), assumed_(assumed) {
    if (!obj_.is_object()) {
      throw ValidationError(path_ + ": expected an object");
    }
  }

  bool has(const char* key) const { return obj_.contains(key); }

  double number(const char* key) {
    mark(key);
    return as_number(require(key), key);
  }

  double number_or(const char* key, double def) {
    if (!has(key)) {
      note_default(key);
      return def;
    }
    mark(key);
    return as_number(obj_.at(key), key);
  }

  long integer_or(const char* key, long def) {
    if (!has(key)) {
      note_default(key);
      return def;
    }
    mark(key);
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) {
      throw ValidationError(join(key) + ": expected an integer");
    }
    return v.get<long>();
  }

  std::string string(const char* key) {
    mark(key);
    const json& v = require(key);
    if (!v.is_string()) {
      throw ValidationError(join(key) + ": expected a string");
    }
    return v.get<std::string>();
  }

  std::string string_or(const char* key, const std::string& def) {
    if (!has(key)) {
      note_default(key);
      return def;
    }
    return string(key);
  }

  // Returns nullptr when absent (and records nothing: presence of whole
  // blocks is reported by the caller).
  const json* child(const char* key) {
    if (!has(key)) return nullptr;
    mark(key);
    return &obj_.at(key);
  }

  std::string join(const char* key) const { return path_ + "." + key; }

  void note_default(const char* key) {
    if (assumed_) assumed_->push_back(join(key));
  }

  // Unknown-key check; call after all expected keys were consumed.
  void done() const {
    for (const auto& item : obj_.items()) {
      if (!consumed_.count(item.key())) {
        throw ValidationError(path_ + ": unknown key \"" + item.key() + "\"");
      }
    }
  }

 private:
  const json& require(const char* key) const {
    if (!obj_.contains(key)) {
      throw ValidationError(join(key) + ": required key missing");
    }
    return obj_.at(key);
  }

  double as_number(const json& v, const char* key) const {
    if (!v.is_number()) {
      throw ValidationError(join(key) + ": expected a number");
    }
    return v.get<double>();
  }

  void mark(const char* key) { consumed_.insert(key); }

  const json& obj_;
  std::string path_;
  std::vector<std::string>* assumed_;
  std::set<std::string> consumed_;
};

inline PlantParams parse_plant(const json* j, std::vector<std::string>* assumed) {
  PlantParams p;
  if (!j) {
    if (assumed) assumed->push_back("plant");
    return p;
  }
  ObjectReader r(*j, "plant", assumed);
  p.K = r.number_or("K", p.K);
  p.D = r.number_or("D", p.D);
  p.w0 = r.number_or("w0", p.w0);
  p.beta_s = r.number_or("beta_s", p.beta_s);
  p.beta_c = r.number_or("beta_c", p.beta_c);
  p.R = r.number_or("R", p.R);
  p.L = r.number_or("L", p.L);
  p.mu = r.number_or("mu", p.mu);
  p.v_sp = r.number_or("v_sp", p.v_sp);
  p.v0 = r.number_or("v0", p.v0);
  if (r.has("u_limit")) {
    p.u_limit = r.number("u_limit");
  } else {
    r.note_default("u_limit");
  }
  r.done();
  return p;
}

inline GainMapping parse_mapping(const std::string& name,
                                 const std::string& path) {
  if (name == "descending") return GainMapping::kDescending;
  if (name == "ascending") return GainMapping::kAscending;
  throw ValidationError(path + ": mapping must be \"descending\" or "
                        "\"ascending\"");
}

inline Gains parse_gains(const json& j, std::vector<std::string>* assumed) {
  ObjectReader r(j, "gains", assumed);
  Gains g;
  g.k1 = r.number("k1");
  g.k2 = r.number("k2");
  g.k3 = r.number("k3");
  g.k4 = r.number("k4");
  g.mapping = parse_mapping(r.string("mapping"), "gains.mapping");
  r.done();
  check_gains(g);
  return g;
}

inline Profile parse_profile(const json& j, std::vector<std::string>* assumed) {
  ObjectReader r(j, "sim.profile", assumed);
  const std::string type = r.string("type");
  Profile out;
  if (type == "constant") {
    out = ConstantProfile{r.number("level")};
  } else if (type == "ramp_hold") {
    out = RampHoldProfile{r.number("start"), r.number("end"),
                          r.number("t_ramp")};
  } else if (type == "smooth_step") {
    out = SmoothStepProfile{r.number("start"), r.number("end"), r.number("t0"),
                            r.number("t1")};
  } else {
    throw ValidationError(
        "sim.profile.type: one of constant, ramp_hold, smooth_step");
  }
  r.done();
  check_profile(out);
  return out;
}

inline SimConfig parse_sim(const json* j, std::vector<std::string>* assumed) {
  SimConfig cfg;
  if (!j) {
    if (assumed) {
      assumed->push_back("sim");
    }
    return cfg;
  }
  ObjectReader r(*j, "sim", assumed);
  if (const json* x0 = r.child("x0")) {
    if (!x0->is_array() || x0->size() != 5) {
      throw ValidationError("sim.x0: expected an array of 5 numbers");
    }
    Vec5 v{};
    for (std::size_t i = 0; i < 5; ++i) {
      if (!(*x0)[i].is_number()) {
        throw ValidationError("sim.x0: expected an array of 5 numbers");
      }
      v[i] = (*x0)[i].get<double>();
    }
    cfg.x0 = State::from_vec(v);
  } else {
    r.note_default("x0");
  }
  cfg.dt = r.number_or("dt", cfg.dt);
  cfg.t_end = r.number_or("t_end", cfg.t_end);
  if (const json* prof = r.child("profile")) {
    cfg.profile = parse_profile(*prof, assumed);
  } else {
    r.note_default("profile");
  }
  if (const json* mode = r.child("control_mode")) {
    if (mode->is_string() && mode->get<std::string>() == "continuous") {
      cfg.control_mode = ControlMode::kContinuous;
    } else if (mode->is_object()) {
      ObjectReader m(*mode, "sim.control_mode", assumed);
      if (const json* zoh = m.child("zoh")) {
        ObjectReader z(*zoh, "sim.control_mode.zoh", assumed);
        cfg.control_mode = ControlMode::kZoh;
        cfg.zoh_sample_period = z.number("sample_period");
        z.done();
      } else {
        throw ValidationError("sim.control_mode: \"continuous\" or {\"zoh\": "
                              "{\"sample_period\": ...}}");
      }
      m.done();
    } else {
      throw ValidationError("sim.control_mode: \"continuous\" or {\"zoh\": "
                            "{\"sample_period\": ...}}");
    }
  } else {
    r.note_default("control_mode");
  }
  cfg.open_loop_u = r.number_or("open_loop_u", cfg.open_loop_u);
  cfg.log_stride = r.integer_or("log_stride", cfg.log_stride);
  cfg.x1_floor = r.number_or("x1_floor", cfg.x1_floor);
  cfg.divergence_limit = r.number_or("divergence_limit", cfg.divergence_limit);
  r.done();
  return cfg;
}

inline GainBounds parse_bound_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw ValidationError(path + ": expected [min, max]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline TuneSettings parse_tune(const json& j,
                               std::vector<std::string>* assumed) {
  ObjectReader r(j, "tune", assumed);
  TuneSettings t;
  const std::string method = r.string_or("method", "nelder_mead");
  if (method == "nelder_mead") {
    t.method = TuneMethod::kNelderMead;
  } else if (method == "grid") {
    t.method = TuneMethod::kGrid;
  } else {
    throw ValidationError("tune.method: \"nelder_mead\" or \"grid\"");
  }
  t.budget = static_cast<int>(r.integer_or("budget", t.budget));
  t.grid_points = static_cast<int>(r.integer_or("grid_points", t.grid_points));
  if (const json* b = r.child("bounds")) {
    if (b->is_array()) {
      const GainBounds common = parse_bound_pair(*b, "tune.bounds");
      t.bounds.fill(common);
    } else if (b->is_object()) {
      ObjectReader br(*b, "tune.bounds", assumed);
      const char* names[4] = {"k1", "k2", "k3", "k4"};
      for (std::size_t i = 0; i < 4; ++i) {
        if (const json* pair = br.child(names[i])) {
          t.bounds[i] = parse_bound_pair(*pair, br.join(names[i]));
        } else {
          br.note_default(names[i]);
        }
      }
      br.done();
    } else {
      throw ValidationError("tune.bounds: [min, max] or {\"k1\": [min, max], ...}");
    }
  } else {
    r.note_default("bounds");
  }
  if (const json* w = r.child("weights")) {
    ObjectReader wr(*w, "tune.weights", assumed);
    t.w_ise = wr.number_or("ise", t.w_ise);
    t.w_settle = wr.number_or("settle", t.w_settle);
    t.w_sat = wr.number_or("sat", t.w_sat);
    wr.done();
  } else {
    r.note_default("weights");
  }
  r.done();
  return t;
}

}  // namespace config_detail

inline RunConfig parse_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("config: top level must be an object");
  }

  RunConfig cfg;
  config_detail::ObjectReader root(doc, "config", &cfg.assumed_defaults);
  cfg.plant = config_detail::parse_plant(root.child("plant"),
                                         &cfg.assumed_defaults);
  if (const nlohmann::json* g = root.child("gains")) {
    cfg.gains = config_detail::parse_gains(*g, &cfg.assumed_defaults);
  }
  cfg.sim = config_detail::parse_sim(root.child("sim"), &cfg.assumed_defaults);
  cfg.sim.gains = cfg.gains;
  if (const nlohmann::json* t = root.child("tune")) {
    cfg.tune = config_detail::parse_tune(*t, &cfg.assumed_defaults);
  }
  cfg.output_dir = root.string_or("output_dir", cfg.output_dir);
  root.done();

  // fail fast on invalid parameter values; Plant repeats this check later
  (void)Plant{cfg.plant};
  check_sim_config(cfg.sim);
  return cfg;
}

// Assembles the tuner configuration; requires both gains and tune blocks.
inline TuneConfig make_tune_config(const RunConfig& cfg) {
  if (!cfg.gains) {
    throw ValidationError("tune: a gains block is required as the seed");
  }
  if (!cfg.tune) {
    throw ValidationError("tune: a tune block is required");
  }
  TuneConfig t;
  t.scenario = cfg.sim;
  t.initial_gains = *cfg.gains;
  t.method = cfg.tune->method;
  t.bounds = cfg.tune->bounds;
  t.budget = cfg.tune->budget;
  t.w_ise = cfg.tune->w_ise;
  t.w_settle = cfg.tune->w_settle;
  t.w_sat = cfg.tune->w_sat;
  t.grid_points = cfg.tune->grid_points;
  return t;
}

}  // namespace imfl

#endif  // IMFL_CONFIG_HPP_
