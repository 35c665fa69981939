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

#include <cmath>
#include <random>

#include "gtest/gtest.h"

namespace obfuscation {
namespace {

GameParams Base(double a_s, double p_s, double c_s) {
  GameParams p;
  p.a_l = 2.0;
  p.c_l = 1.0;
  p.a_s = a_s;
  p.p_s = p_s;
  p.c_s = c_s;
  p.rho = 1.0;
  p.n = 100;
  p.m = 100.0;
  return p;
}

// P_S - C_S < A_S: nobody obfuscates when nobody else does.
GameParams ZeroRegime() { return Base(1.0, 1.5, 1.0); }
// P_S < C_S: nobody obfuscates whatever the others do.
GameParams StrictZeroRegime() { return Base(1.0, 0.8, 1.0); }
// AC(sigma_L, M) <= P(sigma_L) <= AC(sigma_L, 0) at sigma_L = 1.
GameParams Bistable() { return Base(1.0, 1.8, 0.2); }
// P(0) = P_S > A_S + C_S.
GameParams MaxRegime() { return Base(1.0, 4.0, 1.0); }

TEST(BestResponseTest, Examples) {
  BestResponse zero = ComputeBestResponse(ZeroRegime(), 0.0, 0.0);
  EXPECT_EQ(zero.kind, ResponseKind::kZero);
  EXPECT_DOUBLE_EQ(zero.margin, 1.5 - 2.0);
  BestResponse max = ComputeBestResponse(MaxRegime(), 0.0, 0.0);
  EXPECT_EQ(max.kind, ResponseKind::kMax);
  EXPECT_DOUBLE_EQ(max.margin, 4.0 - 2.0);
}

TEST(BestResponseTest, ExactTieIsIndifferent) {
  // P(0) = P_S = A_S + C_S = AC(0, 0).
  GameParams p = Base(1.0, 2.0, 1.0);
  BestResponse br = ComputeBestResponse(p, 0.0, 0.0);
  EXPECT_EQ(br.kind, ResponseKind::kIndifferent);
  EXPECT_TRUE(br.Contains(0.0, p.m));
  EXPECT_TRUE(br.Contains(0.5 * p.m, p.m));
  EXPECT_TRUE(br.Contains(p.m, p.m));
  EXPECT_FALSE(br.Contains(1.5 * p.m, p.m));
  EXPECT_TRUE(FixedPointCheck(p, 0.0, 0.0));
  // Away from sigma_bar = 0 the abstain value drops and M wins outright.
  EXPECT_EQ(ComputeBestResponse(p, 0.0, 17.0).kind, ResponseKind::kMax);
}

TEST(BestResponseTest, SwitchesAtMostOnceAlongSigmaBar) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    GameParams p = Base(u(rng), u(rng), u(rng));
    p.n = 2 + trial;
    p.m = 5.0 * u(rng);
    const double sigma_l = p.m * u(rng) / 3.0;
    int transitions = 0;
    ResponseKind prev = ResponseKind::kIndifferent;
    for (const BrCurvePoint& point : BrCurve(p, sigma_l, 400)) {
      const ResponseKind kind = point.response.kind;
      if (kind == ResponseKind::kIndifferent) continue;
      if (prev == ResponseKind::kMax) EXPECT_EQ(kind, ResponseKind::kMax);
      if (prev == ResponseKind::kZero && kind == ResponseKind::kMax) {
        ++transitions;
      }
      prev = kind;
    }
    EXPECT_LE(transitions, 1);
  }
}

TEST(OracleTest, ClearRegimesAgree) {
  // N = 1 and rho = 1: a user's own noise carries the full accuracy cost.
  GameParams zero = ZeroRegime();
  zero.n = 1;
  OracleResult oracle = BestResponseOracle(zero, 0.0, 0.0, 10000);
  ASSERT_EQ(oracle.argmax.size(), 1u);
  EXPECT_EQ(oracle.argmax[0], 0.0);

  GameParams max = MaxRegime();
  max.n = 1;
  oracle = BestResponseOracle(max, 0.0, 0.0, 10000);
  ASSERT_EQ(oracle.argmax.size(), 1u);
  EXPECT_EQ(oracle.argmax[0], max.m);
  EXPECT_FALSE(DiagnoseBestResponse(max, 0.0, 0.0, oracle).violated);
}

TEST(OracleTest, WeakOwnNoiseCostProducesFlaggedInteriorOptimum) {
  // N = 100, rho = 1: a user's own noise costs only kappa / N = 1e-4 per unit
  // variance, so a moderate sigma_S buys most of the privacy for almost no
  // accuracy and beats both corners. The diagnostic must say so.
  for (GameParams p : {ZeroRegime(), MaxRegime()}) {
    OracleResult oracle = BestResponseOracle(p, 0.0, 0.0, 10000);
    ASSERT_EQ(oracle.argmax.size(), 1u);
    const double best = oracle.argmax.front();
    EXPECT_GT(best, 0.0);
    EXPECT_LT(best, p.m);
    EXPECT_FALSE(ComputeBestResponse(p, 0.0, 0.0).Contains(best, p.m));
    ApproximationDiagnostic d = DiagnoseBestResponse(p, 0.0, 0.0, oracle);
    EXPECT_TRUE(d.interior_best_positive);
    EXPECT_TRUE(d.violated);
  }
}

TEST(OracleTest, AgreementImpliesNoViolationOnWellScaledPoints) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    GameParams p = Base(u(rng), u(rng), u(rng));
    p.n = 2 + static_cast<int>(10 * unit(rng));
    p.rho = 1.0 / (p.n * (0.1 + 2.9 * unit(rng)));  // rho N in [0.1, 3]
    const double kappa = Kappa(p);
    const double scale = (p.n - 1.0) / p.n;
    p.m = std::max(std::sqrt(20.0 / (kappa * scale)), std::sqrt(1000.0)) *
          (1.0 + unit(rng));
    const double sigma_l = p.m * unit(rng) * 0.05;
    const double sigma_bar = p.m * unit(rng);
    BestResponse br = ComputeBestResponse(p, sigma_l, sigma_bar);
    if (std::abs(br.margin) <= 1e-3) continue;
    OracleResult oracle = BestResponseOracle(p, sigma_l, sigma_bar, 10000);
    ApproximationDiagnostic d =
        DiagnoseBestResponse(p, sigma_l, sigma_bar, oracle);
    const bool agree =
        oracle.argmax.size() == 1 && br.Contains(oracle.argmax[0], p.m);
    if (!agree) EXPECT_TRUE(d.violated) << "trial " << trial;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(MfgEquilibriaTest, Regimes) {
  MfgEquilibria zero = SolveMfgEquilibria(StrictZeroRegime(), 0.0);
  EXPECT_EQ(zero.regime, MfgRegime::kNoObfuscation);
  EXPECT_EQ(zero.equilibria, std::vector<double>{0.0});
  EXPECT_EQ(zero.selected, 0.0);

  // P_S - C_S < A_S but P_S > C_S: all-M is also self-sustaining. The
  // selection rule still picks 0.
  GameParams weak = ZeroRegime();
  MfgEquilibria weak_eq = SolveMfgEquilibria(weak, 0.0);
  EXPECT_EQ(weak_eq.regime, MfgRegime::kBistable);
  EXPECT_EQ(weak_eq.equilibria, (std::vector<double>{0.0, weak.m}));
  EXPECT_EQ(weak_eq.selected, 0.0);

  GameParams bi = Bistable();
  MfgEquilibria bistable = SolveMfgEquilibria(bi, 1.0);
  EXPECT_EQ(bistable.regime, MfgRegime::kBistable);
  EXPECT_EQ(bistable.equilibria, (std::vector<double>{0.0, bi.m}));
  EXPECT_EQ(bistable.selected, 0.0);
  // The selected equilibrium is the one users prefer.
  EXPECT_GT(UserUtility(bi, {1.0, 0.0, 0.0}),
            UserUtility(bi, {1.0, bi.m, bi.m}));

  GameParams mx = MaxRegime();
  MfgEquilibria max = SolveMfgEquilibria(mx, 0.0);
  EXPECT_EQ(max.regime, MfgRegime::kFullObfuscation);
  EXPECT_EQ(max.equilibria, std::vector<double>{mx.m});
  EXPECT_EQ(max.selected, mx.m);
}

TEST(MfgEquilibriaTest, EveryEquilibriumIsAFixedPoint) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.05, 4.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    GameParams p = Base(u(rng), u(rng), u(rng));
    p.n = 1 + static_cast<int>(1000 * unit(rng));
    p.rho = u(rng);
    p.m = 50.0 * u(rng);
    const double sigma_l = p.m * unit(rng);
    MfgEquilibria eq = SolveMfgEquilibria(p, sigma_l);
    for (double s : eq.equilibria) {
      EXPECT_TRUE(FixedPointCheck(p, sigma_l, s)) << "trial " << trial;
    }
  }
}

TEST(GammaTest, Examples) {
  EXPECT_EQ(Gamma(ZeroRegime(), 0.0), 0.0);
  GameParams p = Base(0.5, 2.0, 1.0);
  EXPECT_EQ(Gamma(p, 0.0), p.m);
  // tau_hat = sqrt(1 / ln 2) deters obfuscation.
  const double tau_hat = std::sqrt(1.0 / std::log(2.0));
  EXPECT_EQ(Gamma(p, tau_hat), 0.0);
  EXPECT_EQ(Gamma(p, 2.0 * tau_hat), 0.0);
}

TEST(GammaTest, NonIncreasingStep) {
  GameParams p = Base(0.5, 2.0, 1.0);
  p.m = 10.0;
  int jumps = 0;
  double prev = Gamma(p, 0.0);
  for (int k = 1; k <= 1000; ++k) {
    const double g = Gamma(p, p.m * k / 1000.0);
    EXPECT_TRUE(g == 0.0 || g == p.m);
    EXPECT_LE(g, prev);
    if (g != prev) ++jumps;
    prev = g;
  }
  EXPECT_EQ(jumps, 1);
}

TEST(FixedPointTest, ZeroRegimeRejectsMax) {
  GameParams p = StrictZeroRegime();
  EXPECT_TRUE(FixedPointCheck(p, 0.0, 0.0));
  EXPECT_FALSE(FixedPointCheck(p, 0.0, p.m));
}

TEST(BrCurveTest, ShapesAcrossRegimes) {
  auto kinds = [](const GameParams& p, double sigma_l) {
    std::vector<ResponseKind> out;
    for (const auto& point : BrCurve(p, sigma_l, 101)) {
      out.push_back(point.response.kind);
    }
    return out;
  };
  for (ResponseKind k : kinds(StrictZeroRegime(), 1.0))
    EXPECT_EQ(k, ResponseKind::kZero);
  for (ResponseKind k : kinds(MaxRegime(), 0.0))
    EXPECT_EQ(k, ResponseKind::kMax);
  std::vector<ResponseKind> bi = kinds(Bistable(), 1.0);
  EXPECT_EQ(bi.front(), ResponseKind::kZero);
  EXPECT_EQ(bi.back(), ResponseKind::kMax);

  std::vector<BrCurvePoint> two = BrCurve(ZeroRegime(), 0.0, 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].sigma_bar_other, 0.0);
  EXPECT_EQ(two[1].sigma_bar_other, ZeroRegime().m);
}

TEST(NamesTest, ResponseKinds) {
  EXPECT_EQ(ResponseKindName(ResponseKind::kZero), "zero");
  EXPECT_EQ(ResponseKindName(ResponseKind::kMax), "max");
  EXPECT_EQ(ResponseKindName(ResponseKind::kIndifferent), "indifferent");
}

}  // namespace
}  // namespace obfuscation
