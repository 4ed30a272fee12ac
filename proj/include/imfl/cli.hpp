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

// Command dispatch behind the imfl binary. Kept header-side so the commands
// can be exercised in-process by tests.
//
// Exit codes: 0 success, 1 parse/validation failure, 2 aborted simulation
// (singularity or divergence), 3 verification failure.

#ifndef IMFL_CLI_HPP_
#define IMFL_CLI_HPP_

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "imfl/config.hpp"
#include "imfl/io.hpp"
#include "imfl/verify.hpp"

namespace imfl::cli {

enum class LogLevel { kOff = 0, kInfo = 1, kDebug = 2 };

// IMFL_LOG=off|info|debug, default info. Logs go to stderr; file artifacts
// stay byte-deterministic.
inline LogLevel log_level() {
  const char* env = std::getenv("IMFL_LOG");
  if (!env) return LogLevel::kInfo;
  const std::string v(env);
  if (v == "off") return LogLevel::kOff;
  if (v == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::kInfo) std::cerr << "[imfl] " << msg << "\n";
}

inline void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::kDebug) {
    std::cerr << "[imfl:debug] " << msg << "\n";
  }
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitAborted = 2;
inline constexpr int kExitVerifyFailed = 3;

inline int cmd_simulate(const RunConfig& cfg) {
  const Plant plant{cfg.plant};
  const SimResult res = simulate(cfg.sim, plant);
  const std::filesystem::path out(cfg.output_dir);
  io::atomic_write(out / "trajectory.csv", io::trajectory_csv(res));
  io::atomic_write(out / "metrics.json",
                   io::dump_json(io::metrics_json(res, cfg)));
  log_info("simulate: status=" + std::string(to_string(res.status)) +
           ", rows=" + std::to_string(res.rows.size()));
  return res.status == SimStatus::kCompleted ? kExitOk : kExitAborted;
}

inline int cmd_verify(const RunConfig& cfg) {
  const Plant plant{cfg.plant};
  const VerificationReport rep = run_verification(plant);
  const std::filesystem::path out(cfg.output_dir);
  io::atomic_write(out / "verification.json",
                   io::dump_json(io::verification_json(rep)));
  log_info(std::string("verify: ") + (rep.pass ? "PASS" : "FAIL"));
  return rep.pass ? kExitOk : kExitVerifyFailed;
}

inline int cmd_stability(const RunConfig& cfg) {
  if (!cfg.gains) {
    throw ValidationError("stability: a gains block is required");
  }
  Gains desc = *cfg.gains;
  desc.mapping = GainMapping::kDescending;
  Gains asc = *cfg.gains;
  asc.mapping = GainMapping::kAscending;

  io::ordered_json j;
  j["gains"] = {{"k1", cfg.gains->k1},
                {"k2", cfg.gains->k2},
                {"k3", cfg.gains->k3},
                {"k4", cfg.gains->k4}};
  j["configured_mapping"] = io::mapping_name(cfg.gains->mapping);
  j["descending"] = io::routh_json(routh_hurwitz(desc));
  j["ascending"] = io::routh_json(routh_hurwitz(asc));
  const std::filesystem::path out(cfg.output_dir);
  io::atomic_write(out / "routh.json", io::dump_json(j));
  log_info("stability: routh.json written (both mappings)");
  return kExitOk;
}

inline int cmd_tune(const RunConfig& cfg) {
  const Plant plant{cfg.plant};
  const TuneConfig tc = make_tune_config(cfg);
  const TuneResult res = tune(tc, plant);
  const std::filesystem::path out(cfg.output_dir);
  io::atomic_write(out / "tune_trace.csv", io::tune_trace_csv(res));
  io::atomic_write(out / "best_gains.json",
                   io::dump_json(io::best_gains_json(res, tc.initial_gains)));
  log_info("tune: evaluations=" + std::to_string(res.evaluations) +
           (res.feasible ? "" : " (no feasible candidate)"));
  return kExitOk;
}

inline int run_command(const std::string& command, const RunConfig& cfg) {
  try {
    if (command == "simulate") return cmd_simulate(cfg);
    if (command == "verify") return cmd_verify(cfg);
    if (command == "stability") return cmd_stability(cfg);
    if (command == "tune") return cmd_tune(cfg);
    std::cerr << "imfl: unknown command \"" << command << "\"\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "imfl: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "imfl: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SingularityError& e) {
    std::cerr << "imfl: " << e.what() << "\n";
    return kExitAborted;
  } catch (const DegenerateDecouplingError& e) {
    std::cerr << "imfl: " << e.what() << "\n";
    return kExitAborted;
  }
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot read config file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace imfl::cli

#endif  // IMFL_CLI_HPP_
