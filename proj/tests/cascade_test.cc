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

#include <cmath>

#include "gtest/gtest.h"
#include "obfuscation/mfg_solver.h"

namespace obfuscation {
namespace {

// Independently evaluated threshold of the bistable example: the mean
// variance of the others at which AC(1, sigma_bar) = P(1).
constexpr double kThresholdMeanVariance = 5.474791785493944;

GameParams BistableExample() {
  GameParams p;
  p.a_s = 1.0;
  p.c_s = 0.2;
  p.p_s = 1.8;
  p.rho = 1.0;
  p.n = 100;
  p.m = 100.0;
  return p;
}

bool AllEqual(const std::vector<uint8_t>& state, uint8_t value) {
  for (uint8_t s : state) {
    if (s != value) return false;
  }
  return true;
}

TEST(CascadeTest, ThresholdSeparatesTheSeeds) {
  GameParams p = BistableExample();
  // Bisect for the threshold with the user-level formula written out.
  auto gap = [&](double s2) {
    const double kappa = 1.0 / (p.rho * p.rho * p.n);
    return p.a_s * std::exp(-kappa * (1.0 + (p.n - 1.0) / p.n * s2)) + p.c_s -
           p.p_s * (1.0 - std::exp(-1.0));
  };
  double lo = 0.0, hi = p.m * p.m;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(lo, kThresholdMeanVariance, 1e-9);
  // One seed out of 99 others: mean variance M^2 / 99 is far above it.
  EXPECT_GT(p.m * p.m / (p.n - 1), kThresholdMeanVariance);
}

TEST(CascadeTest, OnePercentSeedCascadesToAllMax) {
  GameParams p = BistableExample();
  for (UpdateSchedule schedule :
       {UpdateSchedule::kAsynchronous, UpdateSchedule::kSynchronous}) {
    CascadeOptions options;
    options.sigma_l = 1.0;
    options.seed_fraction = 0.01;
    options.schedule = schedule;
    options.rng_seed = 42;
    options.max_rounds = 20;
    auto trace = SimulateCascade(p, options);
    ASSERT_TRUE(trace.ok()) << trace.status();
    EXPECT_TRUE(trace->converged);
    EXPECT_LE(trace->passes(), 20);
    EXPECT_TRUE(AllEqual(trace->rounds.back(), 1));
    EXPECT_DOUBLE_EQ(trace->final_mean_variance, p.m * p.m);
    EXPECT_TRUE(FixedPointCheck(p, 1.0, p.m));
    EXPECT_EQ(trace->adoption_fraction.front(), 0.01);
  }
}

TEST(CascadeTest, UnseededStaysAtZero) {
  GameParams p = BistableExample();
  CascadeOptions options;
  options.sigma_l = 1.0;
  options.max_rounds = 20;
  auto trace = SimulateCascade(p, options);
  ASSERT_TRUE(trace.ok());
  EXPECT_TRUE(trace->converged);
  EXPECT_EQ(trace->passes(), 1);
  EXPECT_TRUE(AllEqual(trace->rounds.back(), 0));
  EXPECT_TRUE(FixedPointCheck(p, 1.0, 0.0));
}

TEST(CascadeTest, ZeroRegimeCollapsesFromAnySeed) {
  GameParams p = BistableExample();
  p.p_s = 0.15;  // P_S < C_S: no sigma_bar makes obfuscation pay
  for (double f : {0.0, 0.3, 1.0}) {
    CascadeOptions options;
    options.seed_fraction = f;
    auto trace = SimulateCascade(p, options);
    ASSERT_TRUE(trace.ok());
    EXPECT_TRUE(trace->converged);
    EXPECT_TRUE(AllEqual(trace->rounds.back(), 0)) << f;
  }
}

TEST(CascadeTest, FullObfuscationInOnePass) {
  GameParams p = BistableExample();
  p.p_s = 4.0;
  CascadeOptions options;  // sigma_L = 0, nobody seeded
  auto trace = SimulateCascade(p, options);
  ASSERT_TRUE(trace.ok());
  ASSERT_GE(trace->rounds.size(), 2u);
  EXPECT_TRUE(AllEqual(trace->rounds[1], 1));
  EXPECT_TRUE(trace->converged);
  EXPECT_EQ(trace->passes(), 2);  // the second pass confirms nothing moves
}

TEST(CascadeTest, AbsorbingStatesNeverLeft) {
  GameParams p = BistableExample();
  for (double f : {0.0, 1.0}) {
    CascadeOptions options;
    options.sigma_l = 1.0;
    options.seed_fraction = f;
    options.rng_seed = 9;
    auto trace = SimulateCascade(p, options);
    ASSERT_TRUE(trace.ok());
    for (const auto& state : trace->rounds) {
      EXPECT_TRUE(AllEqual(state, f == 0.0 ? 0 : 1));
    }
  }
}

TEST(CascadeTest, SameSeedSameTrace) {
  GameParams p = BistableExample();
  CascadeOptions options;
  options.sigma_l = 1.0;
  options.seed_fraction = 0.05;
  options.rng_seed = 1234;
  auto a = SimulateCascade(p, options);
  auto b = SimulateCascade(p, options);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->rounds, b->rounds);
}

TEST(CascadeTest, RejectsBadOptions) {
  GameParams p = BistableExample();
  CascadeOptions options;
  options.seed_fraction = 1.5;
  EXPECT_EQ(SimulateCascade(p, options).status().code(),
            absl::StatusCode::kInvalidArgument);
  options.seed_fraction = 0.0;
  options.max_rounds = 0;
  EXPECT_FALSE(SimulateCascade(p, options).ok());
  EXPECT_FALSE(ParseUpdateSchedule("random").ok());
  EXPECT_EQ(*ParseUpdateSchedule("sync"), UpdateSchedule::kSynchronous);
}

}  // namespace
}  // namespace obfuscation
