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

#include "obfuscation/dp_calibration.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace obfuscation {
namespace {

double Constant(const DpSpec& spec) {
  return spec.sensitivity * std::sqrt(2.0 * std::log(1.25 / spec.delta));
}

}  // namespace

absl::Status DpSpec::Validate() const {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  if (!(sensitivity > 0.0) || std::isinf(sensitivity)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitivity must be finite and > 0, got ", sensitivity));
  }
  return absl::OkStatus();
}

absl::StatusOr<EpsilonResult> GaussianEpsilon(const DpSpec& spec,
                                              double total_std) {
  if (auto status = spec.Validate(); !status.ok()) return status;
  if (total_std == 0.0) {
    return absl::OutOfRangeError(
        "total noise std is 0: leakage is unbounded (epsilon = infinity)");
  }
  if (!(total_std > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("total noise std must be > 0, got ", total_std));
  }
  EpsilonResult result;
  result.epsilon = Constant(spec) / total_std;
  result.valid = result.epsilon < 1.0;
  return result;
}

absl::StatusOr<DpScalingReport> CheckDpScaling(
    const DpSpec& spec, std::span<const std::pair<double, double>> pairs) {
  if (auto status = spec.Validate(); !status.ok()) return status;
  DpScalingReport report;
  report.constant = Constant(spec);
  for (size_t i = 0; i < pairs.size(); ++i) {
    const auto [sigma_l, sigma_s] = pairs[i];
    if (sigma_l < 0.0 || sigma_s < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("pair ", i, " has a negative deviation (", sigma_l, ", ",
                       sigma_s, ")"));
    }
    DpScalingRow row;
    row.index = static_cast<int>(i);
    row.sigma_l = sigma_l;
    row.sigma_s = sigma_s;
    row.combined_std = std::hypot(sigma_l, sigma_s);
    auto eps = GaussianEpsilon(spec, row.combined_std);
    if (!eps.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("pair ", i, ": ", eps.status().message()));
    }
    row.epsilon = eps->epsilon;
    row.valid = eps->valid;
    const double deviation =
        std::abs(row.epsilon * row.combined_std - report.constant) /
        report.constant;
    report.max_relative_deviation =
        std::max(report.max_relative_deviation, deviation);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace obfuscation
