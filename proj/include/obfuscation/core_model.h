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

#ifndef OBFUSCATION_CORE_MODEL_H_
#define OBFUSCATION_CORE_MODEL_H_

#include <limits>

#include "absl/status/status.h"

namespace obfuscation {

// Exponent applied to the combined noise variance in the privacy level.
//   kInverseVariance: eps_p = c_p / (sigma_L^2 + sigma_S^2)
//   kInverseStd:      eps_p = c_p / sqrt(sigma_L^2 + sigma_S^2)
// The closed-form deterrence threshold tau_hat is exact only under
// kInverseVariance, which is therefore the default.
enum class PrivacyExponent { kInverseVariance, kInverseStd };

double ExponentValue(PrivacyExponent exponent);

// Privacy level returned when neither party adds noise. exp(-kUnboundedLeakage)
// evaluates to exactly 0.
inline constexpr double kUnboundedLeakage =
    std::numeric_limits<double>::infinity();

struct ModelConventions {
  double c_g = 1.0;
  double c_p = 1.0;
  PrivacyExponent privacy_exponent = PrivacyExponent::kInverseVariance;
};

// Scalar constants of the bi-level game. Users share symmetric utilities.
struct GameParams {
  double a_l = 1.0;  // learner accuracy benefit
  double c_l = 0.0;  // learner flat perturbation cost
  double a_s = 1.0;  // user accuracy benefit
  double p_s = 1.0;  // user maximum privacy loss
  double c_s = 0.0;  // user flat obfuscation cost
  double rho = 1.0;  // regularization constant
  int n = 1;         // number of users
  double m = 1.0;    // largest admissible noise standard deviation
  ModelConventions conventions;

  absl::Status Validate() const;
};

// One evaluation point: learner noise, other users' average noise, own noise.
struct NoiseProfile {
  double sigma_l = 0.0;
  double sigma_bar_other = 0.0;
  double sigma_s = 0.0;

  absl::Status Validate(const GameParams& params) const;
};

// kappa = 1 / (rho^2 N).
double Kappa(const GameParams& params);

// Excess expected loss eps_g of the perturbed classifier:
//   c_g * kappa * (sigma_L^2 + (N-1)/N sigma_bar^2 + 1/N sigma_S^2).
double AccuracyLevel(const GameParams& params, const NoiseProfile& noise);

// Differential-privacy level c_p * (sigma_L^2 + sigma_S^2)^(-alpha).
// Returns kUnboundedLeakage when both deviations are zero.
double PrivacyLevel(const GameParams& params, double sigma_l, double sigma_s);

// True iff eps lies in (0, 1), the range where the privacy-level scaling is
// stated to hold. Values outside are reported, never clamped.
bool PrivacyLevelInStatedRange(double eps);

double UserUtility(const GameParams& params, const NoiseProfile& noise);

// Learner utility when every user perturbs with sigma_bar.
double LearnerUtility(const GameParams& params, double sigma_l,
                      double sigma_bar);

// P(sigma_L) = P_S (1 - exp(-eps_p(sigma_L, 0))): privacy loss of a user who
// does not obfuscate.
double PrivacyPressure(const GameParams& params, double sigma_l);

// AC(sigma_L, sigma_bar) = A_S exp(-eps_g(sigma_L, sigma_bar, 0)) + C_S: what
// a user forgoes by obfuscating.
double AbstainValue(const GameParams& params, double sigma_l,
                    double sigma_bar_other);

}  // namespace obfuscation

#endif  // OBFUSCATION_CORE_MODEL_H_
