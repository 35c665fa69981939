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

// Flat "key = value" run configuration shared by every CLI subcommand.
//
//   # comment
//   game.P_S = 2
//   sweep.P_S.min = 0.5
//   sweep.P_S.max = 5
//   sweep.P_S.steps = 50
//
// Keys are case-sensitive; unknown keys are rejected with their line number.

#ifndef OBFUSCATION_RUN_CONFIG_H_
#define OBFUSCATION_RUN_CONFIG_H_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "obfuscation/cascade.h"
#include "obfuscation/core_model.h"
#include "obfuscation/erm_lab.h"

namespace obfuscation {

enum class OutputFormat { kCsv, kJson };

absl::StatusOr<OutputFormat> ParseOutputFormat(std::string_view name);

// One swept game parameter; `key` is the bare parameter name, e.g. "P_S".
struct SweepAxis {
  std::string key;
  double min = 0.0;
  double max = 0.0;
  int steps = 0;

  // steps evenly spaced values from min to max; N values are rounded.
  std::vector<double> Values() const;
};

struct ErmSettings {
  int n = 500;
  int d = 5;
  double rho = 0.1;
  double separation = 1.0;
  int replications = 50;
  std::vector<double> levels = {0.0, 0.5, 1.0, 2.0,
                                4.0};  // variance aggregates
  Loss loss = Loss::kUnhinged;
  int n_ref = 100000;
  int n_eval = 100000;
  int compare_n = 0;  // when > 0, rerun at this N and report the slope ratio
};

struct DpSettings {
  double delta = 1e-5;
  double sensitivity = 1.0;
  std::vector<std::pair<double, double>> pairs = {{1, 0}, {2, 0}, {3, 0}};
};

struct RunConfig {
  GameParams game;
  std::set<std::string> game_keys;  // game.* keys given explicitly

  std::vector<SweepAxis> sweep;  // in order of first appearance
  int64_t sweep_max_points = 1000000;

  double sigma_l = 0.0;  // learner.sigma_L
  bool has_sigma_l = false;
  int br_points = 101;

  double cascade_seed_fraction = 0.01;
  UpdateSchedule cascade_schedule = UpdateSchedule::kAsynchronous;
  int cascade_max_rounds = 100;

  bool has_erm = false;  // any erm.* key present
  ErmSettings erm;
  bool has_dp = false;  // any dp.* key present
  DpSettings dp;

  std::string output_dir = ".";
  OutputFormat format = OutputFormat::kCsv;
  uint64_t seed = 0;
  int jobs = 1;
};

// Game parameter names accepted after "game." and "sweep.".
const std::vector<std::string>& GameKeys();

absl::StatusOr<RunConfig> ParseRunConfig(std::string_view text);
absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path);

// Sets a game parameter by name ("P_S", "N", ...).
absl::Status SetGameValue(GameParams& params, std::string_view key,
                          double value);

// The fixed game parameters, requiring every mandatory key that is not swept.
absl::StatusOr<GameParams> RequireGame(const RunConfig& config);

}  // namespace obfuscation

#endif  // OBFUSCATION_RUN_CONFIG_H_
