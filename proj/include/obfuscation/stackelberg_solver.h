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

// Learner level of the game: the deterrence thresholds, the induced leader
// utility and the equilibrium of the whole bi-level game.

#ifndef OBFUSCATION_STACKELBERG_SOLVER_H_
#define OBFUSCATION_STACKELBERG_SOLVER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "obfuscation/core_model.h"

namespace obfuscation {

inline constexpr int kCrossingScanIntervals = 1000;
inline constexpr double kRootTolerance = 1e-10;
inline constexpr int kLeaderScanPoints = 10000;
// Parameter points this close to a regime boundary are not classified.
inline constexpr double kBoundaryTolerance = 1e-9;
inline constexpr double kPromiseTieTolerance = 1e-12;

// tau_hat = sqrt(1 / ln(P_S / (P_S - C_S))).
// FailedPrecondition when P_S <= C_S (no promise deters obfuscation).
// OutOfRange when C_S == 0 (the threshold is infinite).
absl::StatusOr<double> TauHat(const GameParams& params);

// All sign changes of P(sigma) - AC(sigma, 0) on (0, M], each refined by
// bisection, in increasing order.
std::vector<double> FindThresholdCrossings(const GameParams& params);

// Smallest sigma in (0, M] with P(sigma) = AC(sigma, 0).
// FailedPrecondition when no crossing exists; the message says which side
// dominates.
absl::StatusOr<double> TauExact(const GameParams& params);

struct Thresholds {
  std::optional<double> tau_exact;
  std::optional<double> tau_hat;
  double kappa = 0.0;
  std::vector<double> crossings;
  std::vector<std::string> diagnostics;
};

Thresholds ComputeThresholds(const GameParams& params);

// U_L(sigma_L, Gamma(sigma_L)), exact.
double InducedLeaderUtility(const GameParams& params, double sigma_l);

struct PromiseDecision {
  double sigma_l = 0.0;
  bool promise = false;
  std::optional<std::string> diagnostic;
};

// Leader's promise outside the status quo: 0 when
// kappa > ln(A_L/C_L) ln(P_S/(P_S - C_S)), tau_hat when the inequality is
// reversed. Ties go to 0.
PromiseDecision SgEquilibrium(const GameParams& params);

enum class Regime { kStatusQuo, kFullObfuscation, kPrivacyPromise, kBoundary };

std::string_view RegimeName(Regime regime);

struct RegimeConditions {
  double accuracy_margin = 0.0;  // (P_S - C_S) - A_S
  double kappa = 0.0;
  double promise_threshold = 0.0;  // ln(A_L/C_L) ln(P_S/(P_S - C_S))
  double promise_margin = 0.0;     // kappa - promise_threshold
};

RegimeConditions EvaluateConditions(const GameParams& params);

struct LeaderScan {
  double best_sigma_l = 0.0;
  double best_utility = 0.0;
  double cell = 0.0;
};

struct EquilibriumReport {
  double sigma_l_dagger = 0.0;
  double sigma_bar_dagger = 0.0;
  Regime regime = Regime::kStatusQuo;
  double learner_utility_at_eq = 0.0;
  double user_utility_at_eq = 0.0;
  Thresholds thresholds;
  RegimeConditions conditions;
  std::vector<std::string> diagnostics;
  // Filled by SolvePbne only.
  std::optional<LeaderScan> scan;
};

// The status-quo report when P_S - C_S < A_S, nullopt otherwise.
std::optional<EquilibriumReport> StatusQuo(const GameParams& params);

// Table-row classification from the two closed-form conditions.
EquilibriumReport ClassifyRegime(const GameParams& params);

// Evaluates U_L(sigma, Gamma(sigma)) on n_points evenly spaced sigma in
// [0, M] and returns the first maximizer.
LeaderScan ScanLeaderUtility(const GameParams& params, int n_points);

// Composes StatusQuo / SgEquilibrium with Gamma and verifies the result:
// the follower response must be a fixed point, and no grid point may beat
// the closed-form promise by more than the scan resolution plus the known
// gap between tau_hat and the exact threshold. Internal error otherwise.
absl::StatusOr<EquilibriumReport> SolvePbne(const GameParams& params);

}  // namespace obfuscation

#endif  // OBFUSCATION_STACKELBERG_SOLVER_H_
