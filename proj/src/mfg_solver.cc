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

#include "obfuscation/mfg_solver.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace obfuscation {
namespace {

constexpr double kOracleTieTolerance = 1e-9;

}  // namespace

std::string_view ResponseKindName(ResponseKind kind) {
  switch (kind) {
    case ResponseKind::kZero:
      return "zero";
    case ResponseKind::kMax:
      return "max";
    case ResponseKind::kIndifferent:
      return "indifferent";
  }
  return "unknown";
}

bool BestResponse::Contains(double sigma, double m) const {
  switch (kind) {
    case ResponseKind::kZero:
      return sigma == 0.0;
    case ResponseKind::kMax:
      return sigma == m;
    case ResponseKind::kIndifferent:
      return sigma >= 0.0 && sigma <= m;
  }
  return false;
}

BestResponse ComputeBestResponse(const GameParams& params, double sigma_l,
                                 double sigma_bar_other) {
  const double margin = PrivacyPressure(params, sigma_l) -
                        AbstainValue(params, sigma_l, sigma_bar_other);
  if (margin < -kIndifferenceTolerance) return {ResponseKind::kZero, margin};
  if (margin > kIndifferenceTolerance) return {ResponseKind::kMax, margin};
  return {ResponseKind::kIndifferent, margin};
}

OracleResult BestResponseOracle(const GameParams& params, double sigma_l,
                                double sigma_bar_other, int grid_size) {
  assert(grid_size >= 2);
  OracleResult result;
  std::vector<double> utilities(static_cast<size_t>(grid_size) + 1);
  const double step = params.m / grid_size;
  auto sigma_at = [&](int k) { return k == grid_size ? params.m : k * step; };
  result.best_positive = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid_size; ++k) {
    const double sigma = sigma_at(k);
    utilities[k] = UserUtility(params, {sigma_l, sigma_bar_other, sigma});
    if (k > 0 && utilities[k] > result.best_positive) {
      result.best_positive = utilities[k];
      result.best_positive_sigma = sigma;
    }
  }
  result.utility_at_zero = utilities.front();
  result.utility_at_max = utilities.back();
  result.max_utility = *std::max_element(utilities.begin(), utilities.end());
  for (int k = 0; k <= grid_size; ++k) {
    if (utilities[k] >= result.max_utility - kOracleTieTolerance) {
      result.argmax.push_back(sigma_at(k));
    }
  }
  return result;
}

ApproximationDiagnostic DiagnoseBestResponse(const GameParams& params,
                                             double sigma_l,
                                             double sigma_bar_other,
                                             const OracleResult& oracle) {
  ApproximationDiagnostic d;
  d.margin = PrivacyPressure(params, sigma_l) -
             AbstainValue(params, sigma_l, sigma_bar_other);
  d.obfuscation_residual = oracle.best_positive + params.c_s;
  d.corner_residual = oracle.utility_at_max + params.c_s;
  d.interior_best_positive =
      oracle.best_positive > oracle.utility_at_max + kOracleTieTolerance;
  if (d.margin < 0.0) {
    // Predicted {0}: broken only if some positive sigma does at least as well
    // as sigma = 0, i.e. the obfuscation residual reaches |margin|.
    d.violated = d.obfuscation_residual >= -d.margin - kOracleTieTolerance;
  } else {
    // Predicted {M}: broken if M is not the best positive response, or if the
    // corner residual falls below -margin so that sigma = 0 catches up.
    d.violated = d.interior_best_positive ||
                 d.corner_residual <= -d.margin + kOracleTieTolerance;
  }
  return d;
}

std::string_view MfgRegimeName(MfgRegime regime) {
  switch (regime) {
    case MfgRegime::kNoObfuscation:
      return "no_obfuscation";
    case MfgRegime::kBistable:
      return "bistable";
    case MfgRegime::kFullObfuscation:
      return "full_obfuscation";
  }
  return "unknown";
}

MfgEquilibria SolveMfgEquilibria(const GameParams& params, double sigma_l) {
  const double pressure = PrivacyPressure(params, sigma_l);
  const double abstain_all_max = AbstainValue(params, sigma_l, params.m);
  const double abstain_all_zero = AbstainValue(params, sigma_l, 0.0);
  MfgEquilibria out;
  if (pressure < abstain_all_max) {
    out.regime = MfgRegime::kNoObfuscation;
    out.equilibria = {0.0};
  } else if (pressure <= abstain_all_zero) {
    out.regime = MfgRegime::kBistable;
    out.equilibria = {0.0, params.m};
  } else {
    out.regime = MfgRegime::kFullObfuscation;
    out.equilibria = {params.m};
  }
  out.selected = Gamma(params, sigma_l);
  return out;
}

double Gamma(const GameParams& params, double sigma_l) {
  return PrivacyPressure(params, sigma_l) > AbstainValue(params, sigma_l, 0.0)
             ? params.m
             : 0.0;
}

bool FixedPointCheck(const GameParams& params, double sigma_l,
                     double sigma_bar) {
  return ComputeBestResponse(params, sigma_l, sigma_bar)
      .Contains(sigma_bar, params.m);
}

std::vector<BrCurvePoint> BrCurve(const GameParams& params, double sigma_l,
                                  int n_points) {
  assert(n_points >= 2);
  std::vector<BrCurvePoint> curve;
  curve.reserve(static_cast<size_t>(n_points));
  for (int k = 0; k < n_points; ++k) {
    const double sigma_bar =
        k == n_points - 1 ? params.m : params.m * k / (n_points - 1);
    curve.push_back(
        {sigma_bar, ComputeBestResponse(params, sigma_l, sigma_bar)});
  }
  return curve;
}

}  // namespace obfuscation
