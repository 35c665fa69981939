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

// Best-response dynamics among N users who each choose sigma_S in {0, M}.

#ifndef OBFUSCATION_CASCADE_H_
#define OBFUSCATION_CASCADE_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "obfuscation/core_model.h"

namespace obfuscation {

enum class UpdateSchedule {
  // One round visits every agent once, in a fresh random order, and each
  // agent sees the moves made earlier in the same round.
  kAsynchronous,
  // Every agent responds to the state at the start of the round.
  kSynchronous,
};

std::string_view UpdateScheduleName(UpdateSchedule schedule);
absl::StatusOr<UpdateSchedule> ParseUpdateSchedule(std::string_view name);

struct CascadeOptions {
  double sigma_l = 0.0;
  double seed_fraction = 0.0;
  UpdateSchedule schedule = UpdateSchedule::kAsynchronous;
  uint64_t rng_seed = 0;
  int max_rounds = 100;
};

struct CascadeTrace {
  // rounds[0] is the initial state; rounds[r] the state after pass r.
  // An entry is 1 when the agent obfuscates with sigma_S = M, else 0.
  std::vector<std::vector<uint8_t>> rounds;
  std::vector<double> adoption_fraction;  // one entry per element of rounds
  bool converged = false;
  double final_mean_variance = 0.0;  // mean of sigma_S^2 in the last state

  int passes() const { return static_cast<int>(rounds.size()) - 1; }
};

// Seeds ceil(seed_fraction * N) agents at M and the rest at 0, then runs best
// responses against sigma_bar^{-i} = sqrt(mean of the other agents' variances)
// until a full pass changes nothing or max_rounds passes have run. Indifferent
// agents keep their current action.
absl::StatusOr<CascadeTrace> SimulateCascade(const GameParams& params,
                                             const CascadeOptions& options);

}  // namespace obfuscation

#endif  // OBFUSCATION_CASCADE_H_
