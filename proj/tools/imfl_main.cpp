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

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "imfl/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "imfl: nonlinear injection-moulding plant simulation and "
      "feedback-linearising cavity-pressure control"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  const char* names[] = {"simulate", "verify", "stability", "tune"};
  const char* descs[] = {
      "integrate the (closed- or open-loop) system; writes trajectory.csv "
      "and metrics.json",
      "check the Lie-derivative algebra against finite differences; writes "
      "verification.json",
      "Routh-Hurwitz analysis of the gains under both mappings; writes "
      "routh.json",
      "derivative-free gain search; writes tune_trace.csv and "
      "best_gains.json"};
  for (int i = 0; i < 4; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", out_override,
                    "output directory (overrides config output_dir)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : imfl::cli::kExitConfig;
  }

  try {
    imfl::RunConfig cfg = imfl::cli::load_config_file(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    return imfl::cli::run_command(app.get_subcommands().front()->get_name(),
                                  cfg);
  } catch (const imfl::ParseError& e) {
    std::cerr << "imfl: " << e.what() << "\n";
    return imfl::cli::kExitConfig;
  } catch (const imfl::ValidationError& e) {
    std::cerr << "imfl: " << e.what() << "\n";
    return imfl::cli::kExitConfig;
  }
}
