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

// Gaussian-mechanism calibration: the privacy level reached by adding
// isotropic Gaussian noise of a given total standard deviation.

#ifndef OBFUSCATION_DP_CALIBRATION_H_
#define OBFUSCATION_DP_CALIBRATION_H_

#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace obfuscation {

struct DpSpec {
  double delta = 1e-5;       // failure probability, in (0, 1)
  double sensitivity = 1.0;  // per-record L2 sensitivity, > 0

  absl::Status Validate() const;
};

struct EpsilonResult {
  double epsilon = 0.0;
  // The classical bound only holds for epsilon < 1.
  bool valid = false;
};

// epsilon = sensitivity * sqrt(2 ln(1.25 / delta)) / total_std.
// OutOfRange (unbounded leakage) when total_std == 0.
absl::StatusOr<EpsilonResult> GaussianEpsilon(const DpSpec& spec,
                                              double total_std);

struct DpScalingRow {
  int index = 0;
  double sigma_l = 0.0;
  double sigma_s = 0.0;
  double combined_std = 0.0;
  double epsilon = 0.0;
  bool valid = false;
};

struct DpScalingReport {
  std::vector<DpScalingRow> rows;
  // sensitivity * sqrt(2 ln(1.25 / delta)); epsilon * combined_std should
  // reproduce it for every row.
  double constant = 0.0;
  double max_relative_deviation = 0.0;
};

// Evaluates epsilon at sqrt(sigma_L^2 + sigma_S^2) for each (sigma_L, sigma_S)
// pair. InvalidArgument if a pair has no noise at all.
absl::StatusOr<DpScalingReport> CheckDpScaling(
    const DpSpec& spec, std::span<const std::pair<double, double>> pairs);

}  // namespace obfuscation

#endif  // OBFUSCATION_DP_CALIBRATION_H_
