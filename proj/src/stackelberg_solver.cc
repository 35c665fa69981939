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

#include "obfuscation/stackelberg_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "obfuscation/mfg_solver.h"

namespace obfuscation {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// P(sigma) - AC(sigma, 0); positive means users prefer to obfuscate when
// nobody else does.
double DeterrenceGap(const GameParams& params, double sigma) {
  return PrivacyPressure(params, sigma) - AbstainValue(params, sigma, 0.0);
}

double Bisect(const GameParams& params, double lo, double hi) {
  double g_lo = DeterrenceGap(params, lo);
  while (hi - lo > kRootTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = DeterrenceGap(params, mid);
    if (g_mid == 0.0) return mid;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ln(P_S / (P_S - C_S)); +inf when P_S <= C_S.
double PrivacyLogRatio(const GameParams& params) {
  if (params.p_s <= params.c_s) return kInf;
  return std::log(params.p_s / (params.p_s - params.c_s));
}

bool IsBoundary(const RegimeConditions& c) {
  if (std::abs(c.accuracy_margin) <= kBoundaryTolerance) return true;
  return c.accuracy_margin > 0.0 &&
         std::abs(c.promise_margin) <= kBoundaryTolerance;
}

void FillUtilities(const GameParams& params, EquilibriumReport& report) {
  report.learner_utility_at_eq =
      LearnerUtility(params, report.sigma_l_dagger, report.sigma_bar_dagger);
  report.user_utility_at_eq =
      UserUtility(params, {report.sigma_l_dagger, report.sigma_bar_dagger,
                           report.sigma_bar_dagger});
}

}  // namespace

absl::StatusOr<double> TauHat(const GameParams& params) {
  if (params.p_s <= params.c_s) {
    return absl::FailedPreconditionError(absl::StrCat(
        "tau_hat undefined: P_S=", params.p_s, " <= C_S=", params.c_s,
        "; users are never fully deterred"));
  }
  if (params.c_s == 0.0) {
    return absl::OutOfRangeError(
        "tau_hat is infinite: C_S = 0, obfuscation is free");
  }
  return std::sqrt(1.0 / PrivacyLogRatio(params));
}

std::vector<double> FindThresholdCrossings(const GameParams& params) {
  std::vector<double> roots;
  const double step = params.m / kCrossingScanIntervals;
  double prev_sigma = 0.0;
  double prev_gap = DeterrenceGap(params, 0.0);
  for (int k = 1; k <= kCrossingScanIntervals; ++k) {
    const double sigma = k == kCrossingScanIntervals ? params.m : k * step;
    const double gap = DeterrenceGap(params, sigma);
    if (gap == 0.0) {
      roots.push_back(sigma);
    } else if (prev_gap != 0.0 && (gap > 0.0) != (prev_gap > 0.0)) {
      roots.push_back(Bisect(params, prev_sigma, sigma));
    }
    prev_sigma = sigma;
    prev_gap = gap;
  }
  return roots;
}

absl::StatusOr<double> TauExact(const GameParams& params) {
  const std::vector<double> roots = FindThresholdCrossings(params);
  if (!roots.empty()) return roots.front();
  const double gap = DeterrenceGap(params, params.m);
  return absl::FailedPreconditionError(
      absl::StrCat("no crossing of P(sigma) = AC(sigma, 0) on (0, M]: ",
                   gap > 0.0 ? "privacy pressure dominates everywhere"
                             : "abstaining dominates everywhere"));
}

Thresholds ComputeThresholds(const GameParams& params) {
  Thresholds t;
  t.kappa = Kappa(params);
  if (auto tau_hat = TauHat(params); tau_hat.ok()) {
    t.tau_hat = *tau_hat;
  } else {
    t.diagnostics.emplace_back(tau_hat.status().message());
  }
  t.crossings = FindThresholdCrossings(params);
  if (!t.crossings.empty()) t.tau_exact = t.crossings.front();
  if (t.crossings.size() > 1) {
    t.diagnostics.push_back(
        absl::StrCat(t.crossings.size(),
                     " crossings of P(sigma) = AC(sigma, 0); using the "
                     "smallest"));
  }
  return t;
}

double InducedLeaderUtility(const GameParams& params, double sigma_l) {
  return LearnerUtility(params, sigma_l, Gamma(params, sigma_l));
}

RegimeConditions EvaluateConditions(const GameParams& params) {
  RegimeConditions c;
  c.accuracy_margin = params.p_s - params.c_s - params.a_s;
  c.kappa = Kappa(params);
  const double privacy_log = PrivacyLogRatio(params);
  const double accuracy_log =
      params.c_l > 0.0 ? std::log(params.a_l / params.c_l) : kInf;
  if (privacy_log == 0.0) {
    // C_S = 0: no finite promise deters users.
    c.promise_threshold = 0.0;
  } else {
    c.promise_threshold = accuracy_log * privacy_log;
  }
  c.promise_margin = c.kappa - c.promise_threshold;
  return c;
}

PromiseDecision SgEquilibrium(const GameParams& params) {
  PromiseDecision d;
  if (params.a_l <= params.c_l) {
    d.diagnostic = "A_L <= C_L: a promise never pays, ln(A_L/C_L) <= 0";
    return d;
  }
  if (params.p_s - params.c_s <= params.a_s) {
    d.diagnostic = "P_S - C_S <= A_S: outside the promise regime";
  }
  auto tau_hat = TauHat(params);
  if (!tau_hat.ok()) {
    d.diagnostic = std::string(tau_hat.status().message());
    return d;
  }
  const RegimeConditions c = EvaluateConditions(params);
  if (std::abs(c.promise_margin) <= kPromiseTieTolerance) {
    d.diagnostic = "kappa equals the promise threshold; tie resolved to 0";
    return d;
  }
  if (c.promise_margin < 0.0) {
    d.sigma_l = *tau_hat;
    d.promise = true;
  }
  return d;
}

std::string_view RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kStatusQuo:
      return "StatusQuo";
    case Regime::kFullObfuscation:
      return "FullObfuscation";
    case Regime::kPrivacyPromise:
      return "PrivacyPromise";
    case Regime::kBoundary:
      return "Boundary";
  }
  return "Unknown";
}

std::optional<EquilibriumReport> StatusQuo(const GameParams& params) {
  const RegimeConditions c = EvaluateConditions(params);
  if (!(c.accuracy_margin < -kBoundaryTolerance)) return std::nullopt;
  EquilibriumReport report;
  report.regime = Regime::kStatusQuo;
  report.conditions = c;
  report.thresholds = ComputeThresholds(params);
  FillUtilities(params, report);
  return report;
}

EquilibriumReport ClassifyRegime(const GameParams& params) {
  EquilibriumReport report;
  report.conditions = EvaluateConditions(params);
  report.thresholds = ComputeThresholds(params);
  const RegimeConditions& c = report.conditions;
  if (c.accuracy_margin < -kBoundaryTolerance) {
    report.regime = Regime::kStatusQuo;
  } else if (IsBoundary(c)) {
    report.regime = Regime::kBoundary;
    report.sigma_bar_dagger = Gamma(params, 0.0);
    report.diagnostics.push_back(absl::StrFormat(
        "within %g of a regime boundary (accuracy margin %g, promise margin "
        "%g); tie resolved to no promise",
        kBoundaryTolerance, c.accuracy_margin, c.promise_margin));
  } else if (c.promise_margin > 0.0) {
    report.regime = Regime::kFullObfuscation;
    report.sigma_bar_dagger = params.m;
  } else {
    report.regime = Regime::kPrivacyPromise;
    // promise_margin < 0 forces C_S > 0, so tau_hat exists.
    report.sigma_l_dagger = report.thresholds.tau_hat.value_or(kInf);
    if (report.sigma_l_dagger > params.m) {
      report.diagnostics.push_back(absl::StrCat(
          "tau_hat=", report.sigma_l_dagger, " exceeds M=", params.m,
          "; the promise is not admissible"));
    }
  }
  FillUtilities(params, report);
  return report;
}

LeaderScan ScanLeaderUtility(const GameParams& params, int n_points) {
  LeaderScan scan;
  scan.cell = params.m / (n_points - 1);
  scan.best_utility = -kInf;
  for (int k = 0; k < n_points; ++k) {
    const double sigma = k == n_points - 1 ? params.m : k * scan.cell;
    const double u = InducedLeaderUtility(params, sigma);
    if (u > scan.best_utility) {
      scan.best_utility = u;
      scan.best_sigma_l = sigma;
    }
  }
  return scan;
}

absl::StatusOr<EquilibriumReport> SolvePbne(const GameParams& params) {
  if (auto status = params.Validate(); !status.ok()) return status;

  EquilibriumReport report;
  if (auto status_quo = StatusQuo(params)) {
    report = *std::move(status_quo);
  } else {
    report.conditions = EvaluateConditions(params);
    report.thresholds = ComputeThresholds(params);
    PromiseDecision decision = SgEquilibrium(params);
    if (decision.diagnostic) report.diagnostics.push_back(*decision.diagnostic);
    report.sigma_l_dagger = decision.sigma_l;
    if (report.sigma_l_dagger > params.m) {
      return absl::InvalidArgumentError(
          absl::StrCat("promised sigma_L=", report.sigma_l_dagger,
                       " exceeds M=", params.m, "; enlarge M"));
    }
    report.sigma_bar_dagger = Gamma(params, report.sigma_l_dagger);
    if (IsBoundary(report.conditions)) {
      report.regime = Regime::kBoundary;
    } else if (report.sigma_l_dagger > 0.0 && report.sigma_bar_dagger == 0.0) {
      report.regime = Regime::kPrivacyPromise;
    } else if (report.sigma_l_dagger == 0.0 &&
               report.sigma_bar_dagger == params.m) {
      report.regime = Regime::kFullObfuscation;
    } else {
      return absl::InternalError(absl::StrCat(
          "equilibrium (sigma_L=", report.sigma_l_dagger,
          ", sigma_bar=", report.sigma_bar_dagger,
          ") matches no regime; the promise does not deter users under these "
          "conventions"));
    }
    FillUtilities(params, report);
  }

  if (!FixedPointCheck(params, report.sigma_l_dagger,
                       report.sigma_bar_dagger)) {
    return absl::InternalError(
        absl::StrCat("sigma_bar=", report.sigma_bar_dagger,
                     " is not a best response to itself at sigma_L=",
                     report.sigma_l_dagger));
  }

  const LeaderScan scan = ScanLeaderUtility(params, kLeaderScanPoints);
  const double closed_form =
      InducedLeaderUtility(params, report.sigma_l_dagger);
  // Largest slope of A_L exp(-c_g kappa sigma^2) is A_L sqrt(2 c_g kappa / e).
  const double ck = params.conventions.c_g * Kappa(params);
  const double cell_variation =
      params.a_l * std::sqrt(2.0 * ck / std::exp(1.0)) * scan.cell;
  double approximation_gap = 0.0;
  const Thresholds& t = report.thresholds;
  if (t.tau_exact && t.tau_hat && report.conditions.accuracy_margin > 0.0) {
    approximation_gap =
        std::max(0.0, LearnerUtility(params, *t.tau_exact, 0.0) -
                          LearnerUtility(params, *t.tau_hat, 0.0));
  }
  const double tolerance = std::max(1e-6, cell_variation) + approximation_gap;
  if (scan.best_utility - closed_form > tolerance) {
    return absl::InternalError(absl::StrFormat(
        "leader optimality violated: closed form sigma_L=%.17g gives %.17g, "
        "scan finds sigma_L=%.17g with %.17g (tolerance %.3g)",
        report.sigma_l_dagger, closed_form, scan.best_sigma_l,
        scan.best_utility, tolerance));
  }
  report.scan = scan;
  return report;
}

}  // namespace obfuscation
