// Copyright 2026 The Obfuscation Game Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// obfuscation_cli: solve, sweep and validate the obfuscation game from a flat
// key = value config file.
//
//   obfuscation_cli solve --config game.conf --out results/
//   obfuscation_cli sweep --config atlas.conf --jobs 8 --format json

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "obfuscation/commands.h"
#include "obfuscation/run_config.h"

namespace {

using ::obfuscation::CommandResult;
using ::obfuscation::RunConfig;

struct Flags {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<uint64_t> seed;
  std::optional<int> jobs;
};

void AddCommonFlags(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config_path, "Run configuration file")
      ->required();
  sub->add_option("--out", flags.out,
                  "Output directory (overrides output.dir)");
  sub->add_option("--format", flags.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", flags.seed, "RNG seed (overrides seed)");
  sub->add_option("--jobs", flags.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
}

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  return obfuscation::ExitCodeFor(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria of the bi-level obfuscation game"};
  app.require_subcommand(1);
  Flags flags;
  using Runner = absl::StatusOr<CommandResult> (*)(const RunConfig&);
  const std::pair<const char*, Runner> commands[] = {
      {"solve", obfuscation::RunSolve},
      {"sweep", obfuscation::RunSweep},
      {"br-curve", obfuscation::RunBrCurve},
      {"cascade", obfuscation::RunCascade},
      {"validate", obfuscation::RunValidate},
  };
  const char* help[] = {
      "Solve one game and report its equilibrium",
      "Classify every point of a parameter grid",
      "Export the user best response against the others' noise",
      "Simulate best-response adoption dynamics",
      "Run the excess-risk and privacy-level scaling checks",
  };
  std::vector<CLI::App*> subs;
  for (size_t i = 0; i < std::size(commands); ++i) {
    subs.push_back(app.add_subcommand(commands[i].first, help[i]));
    AddCommonFlags(subs.back(), flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto config = obfuscation::LoadRunConfig(flags.config_path);
  if (!config.ok()) return Fail(config.status());
  if (flags.out) config->output_dir = *flags.out;
  if (flags.format)
    config->format = *obfuscation::ParseOutputFormat(*flags.format);
  if (flags.seed) config->seed = *flags.seed;
  if (flags.jobs) config->jobs = *flags.jobs;

  for (size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    auto result = commands[i].second(*config);
    if (!result.ok()) return Fail(result.status());
    if (auto status = obfuscation::WriteResult(config->output_dir, *result);
        !status.ok()) {
      return Fail(status);
    }
    std::cout << result->summary << "\n";
    return result->passed ? 0 : 1;
  }
  return 2;
}
