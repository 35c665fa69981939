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

#include "obfuscation/core_model.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace obfuscation {
namespace {

absl::Status RequirePositive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must be finite and > 0, got ", value));
  }
  return absl::OkStatus();
}

absl::Status RequireNonNegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must be finite and >= 0, got ", value));
  }
  return absl::OkStatus();
}

absl::Status RequireInRange(double value, double upper, const char* name) {
  if (!(value >= 0.0 && value <= upper)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must lie in [0, M=", upper, "], got ", value));
  }
  return absl::OkStatus();
}

}  // namespace

double ExponentValue(PrivacyExponent exponent) {
  return exponent == PrivacyExponent::kInverseVariance ? 1.0 : 0.5;
}

absl::Status GameParams::Validate() const {
  for (auto status :
       {RequirePositive(a_l, "A_L"), RequireNonNegative(c_l, "C_L"),
        RequirePositive(a_s, "A_S"), RequirePositive(p_s, "P_S"),
        RequireNonNegative(c_s, "C_S"), RequirePositive(rho, "rho"),
        RequirePositive(m, "M"), RequirePositive(conventions.c_g, "c_g"),
        RequirePositive(conventions.c_p, "c_p")}) {
    if (!status.ok()) return status;
  }
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("N must be >= 1, got ", n));
  }
  return absl::OkStatus();
}

absl::Status NoiseProfile::Validate(const GameParams& params) const {
  for (auto status : {RequireInRange(sigma_l, params.m, "sigma_L"),
                      RequireInRange(sigma_bar_other, params.m, "sigma_bar"),
                      RequireInRange(sigma_s, params.m, "sigma_S")}) {
    if (!status.ok()) return status;
  }
  return absl::OkStatus();
}

double Kappa(const GameParams& params) {
  return 1.0 / (params.rho * params.rho * static_cast<double>(params.n));
}

double AccuracyLevel(const GameParams& params, const NoiseProfile& noise) {
  const double n = static_cast<double>(params.n);
  const double variance =
      noise.sigma_l * noise.sigma_l +
      (n - 1.0) / n * noise.sigma_bar_other * noise.sigma_bar_other +
      noise.sigma_s * noise.sigma_s / n;
  return params.conventions.c_g * Kappa(params) * variance;
}

double PrivacyLevel(const GameParams& params, double sigma_l, double sigma_s) {
  const double variance = sigma_l * sigma_l + sigma_s * sigma_s;
  if (variance == 0.0) return kUnboundedLeakage;
  const double alpha = ExponentValue(params.conventions.privacy_exponent);
  const double scale = alpha == 1.0 ? variance : std::sqrt(variance);
  return params.conventions.c_p / scale;
}

bool PrivacyLevelInStatedRange(double eps) { return eps > 0.0 && eps < 1.0; }

double UserUtility(const GameParams& params, const NoiseProfile& noise) {
  const double eps_g = AccuracyLevel(params, noise);
  const double eps_p = PrivacyLevel(params, noise.sigma_l, noise.sigma_s);
  const double cost = noise.sigma_s > 0.0 ? params.c_s : 0.0;
  return params.a_s * std::exp(-eps_g) - params.p_s * (1.0 - std::exp(-eps_p)) -
         cost;
}

double LearnerUtility(const GameParams& params, double sigma_l,
                      double sigma_bar) {
  // With every user at sigma_bar the weighted variance collapses to
  // sigma_L^2 + sigma_bar^2.
  const double eps_g = AccuracyLevel(params, {sigma_l, sigma_bar, sigma_bar});
  const double cost = sigma_l > 0.0 ? params.c_l : 0.0;
  return params.a_l * std::exp(-eps_g) - cost;
}

double PrivacyPressure(const GameParams& params, double sigma_l) {
  return params.p_s * (1.0 - std::exp(-PrivacyLevel(params, sigma_l, 0.0)));
}

double AbstainValue(const GameParams& params, double sigma_l,
                    double sigma_bar_other) {
  return params.a_s *
             std::exp(-AccuracyLevel(params, {sigma_l, sigma_bar_other, 0.0})) +
         params.c_s;
}

}  // namespace obfuscation
