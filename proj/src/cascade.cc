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

#include "obfuscation/cascade.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "absl/strings/str_cat.h"
#include "obfuscation/mfg_solver.h"

namespace obfuscation {
namespace {

// Counts are kept as integers so sigma_bar^{-i} is exact for every agent.
double SigmaBarOther(int obfuscators_other, int n, double m) {
  if (n <= 1) return 0.0;
  return m * std::sqrt(static_cast<double>(obfuscators_other) / (n - 1));
}

uint8_t Respond(const GameParams& params, double sigma_l, int obfuscators,
                uint8_t current) {
  const int others = obfuscators - current;
  const BestResponse br = ComputeBestResponse(
      params, sigma_l, SigmaBarOther(others, params.n, params.m));
  switch (br.kind) {
    case ResponseKind::kZero:
      return 0;
    case ResponseKind::kMax:
      return 1;
    case ResponseKind::kIndifferent:
      return current;
  }
  return current;
}

double AdoptionFraction(const std::vector<uint8_t>& state) {
  const int count = std::accumulate(state.begin(), state.end(), 0);
  return static_cast<double>(count) / static_cast<double>(state.size());
}

}  // namespace

std::string_view UpdateScheduleName(UpdateSchedule schedule) {
  return schedule == UpdateSchedule::kAsynchronous ? "async" : "sync";
}

absl::StatusOr<UpdateSchedule> ParseUpdateSchedule(std::string_view name) {
  if (name == "async") return UpdateSchedule::kAsynchronous;
  if (name == "sync") return UpdateSchedule::kSynchronous;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown schedule '", std::string(name), "' (expected async or sync)"));
}

absl::StatusOr<CascadeTrace> SimulateCascade(const GameParams& params,
                                             const CascadeOptions& options) {
  if (auto status = params.Validate(); !status.ok()) return status;
  if (!(options.seed_fraction >= 0.0 && options.seed_fraction <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "seed_fraction must lie in [0, 1], got ", options.seed_fraction));
  }
  if (options.max_rounds < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("max_rounds must be >= 1, got ", options.max_rounds));
  }
  if (!(options.sigma_l >= 0.0 && options.sigma_l <= params.m)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma_L must lie in [0, M], got ", options.sigma_l));
  }

  const int n = params.n;
  const int seeded = std::min(
      n, static_cast<int>(std::ceil(options.seed_fraction * n - 1e-12)));
  std::vector<uint8_t> state(static_cast<size_t>(n), 0);
  std::fill(state.begin(), state.begin() + seeded, 1);

  std::mt19937_64 rng(options.rng_seed);
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  CascadeTrace trace;
  trace.rounds.push_back(state);
  trace.adoption_fraction.push_back(AdoptionFraction(state));

  int obfuscators = seeded;
  for (int round = 0; round < options.max_rounds; ++round) {
    bool changed = false;
    if (options.schedule == UpdateSchedule::kAsynchronous) {
      std::shuffle(order.begin(), order.end(), rng);
      for (int i : order) {
        const uint8_t next =
            Respond(params, options.sigma_l, obfuscators, state[i]);
        if (next != state[i]) {
          obfuscators += next ? 1 : -1;
          state[i] = next;
          changed = true;
        }
      }
    } else {
      std::vector<uint8_t> next_state(state.size());
      for (int i = 0; i < n; ++i) {
        next_state[i] = Respond(params, options.sigma_l, obfuscators, state[i]);
      }
      changed = next_state != state;
      state = std::move(next_state);
      obfuscators = std::accumulate(state.begin(), state.end(), 0);
    }
    trace.rounds.push_back(state);
    trace.adoption_fraction.push_back(AdoptionFraction(state));
    if (!changed) {
      trace.converged = true;
      break;
    }
  }
  trace.final_mean_variance =
      trace.adoption_fraction.back() * params.m * params.m;
  return trace;
}

}  // namespace obfuscation
