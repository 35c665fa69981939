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

// User level of the game: best responses, symmetric mean-field equilibria and
// the induced response map Gamma.

#ifndef OBFUSCATION_MFG_SOLVER_H_
#define OBFUSCATION_MFG_SOLVER_H_

#include <string_view>
#include <vector>

#include "obfuscation/core_model.h"

namespace obfuscation {

// |P - AC| at or below this is treated as indifference.
inline constexpr double kIndifferenceTolerance = 1e-9;

enum class ResponseKind { kZero, kMax, kIndifferent };

std::string_view ResponseKindName(ResponseKind kind);

struct BestResponse {
  ResponseKind kind = ResponseKind::kZero;
  // Signed P(sigma_L) - AC(sigma_L, sigma_bar_other).
  double margin = 0.0;

  // Whether sigma belongs to {0}, {M} or [0, M] respectively.
  bool Contains(double sigma, double m) const;
};

BestResponse ComputeBestResponse(const GameParams& params, double sigma_l,
                                 double sigma_bar_other);

// Brute-force maximizer of the exact user utility over
// {0} U {k M / grid_size : k = 1..grid_size}.
struct OracleResult {
  std::vector<double> argmax;  // all grid points within 1e-9 of the maximum
  double max_utility = 0.0;
  double utility_at_zero = 0.0;
  double utility_at_max = 0.0;  // at sigma_S = M
  double best_positive = 0.0;   // max utility over the positive grid
  double best_positive_sigma = 0.0;
};

OracleResult BestResponseOracle(const GameParams& params, double sigma_l,
                                double sigma_bar_other, int grid_size);

// Explains where the corner best response departs from the exact utility.
// The closed-form rule models "obfuscate" as earning exactly -C_S; the exact
// utility differs by the residual accuracy benefit a user keeps and the
// residual privacy loss it still suffers. A disagreement with the oracle is
// only possible when |margin| does not exceed those residuals or when the best
// positive response is interior.
struct ApproximationDiagnostic {
  double margin = 0.0;                // P - AC
  double obfuscation_residual = 0.0;  // best positive utility + C_S
  double corner_residual = 0.0;       // utility at M + C_S
  bool interior_best_positive = false;
  bool violated = false;
};

ApproximationDiagnostic DiagnoseBestResponse(const GameParams& params,
                                             double sigma_l,
                                             double sigma_bar_other,
                                             const OracleResult& oracle);

enum class MfgRegime { kNoObfuscation, kBistable, kFullObfuscation };

std::string_view MfgRegimeName(MfgRegime regime);

struct MfgEquilibria {
  std::vector<double> equilibria;  // symmetric fixed points, subset of {0, M}
  double selected = 0.0;
  MfgRegime regime = MfgRegime::kNoObfuscation;
};

MfgEquilibria SolveMfgEquilibria(const GameParams& params, double sigma_l);

// Gamma(sigma_L) = M * 1{P(sigma_L) > AC(sigma_L, 0)}.
double Gamma(const GameParams& params, double sigma_l);

bool FixedPointCheck(const GameParams& params, double sigma_l,
                     double sigma_bar);

struct BrCurvePoint {
  double sigma_bar_other = 0.0;
  BestResponse response;
};

// Best responses at n_points evenly spaced values of sigma_bar_other in [0, M].
std::vector<BrCurvePoint> BrCurve(const GameParams& params, double sigma_l,
                                  int n_points);

}  // namespace obfuscation

#endif  // OBFUSCATION_MFG_SOLVER_H_
