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

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "gtest/gtest.h"

namespace obfuscation {
namespace {

// sqrt(2 ln(1.25e5)) / 5 and / 10, evaluated at 30 significant digits.
constexpr double kEpsilonStdFive = 0.968961052521078;
constexpr double kEpsilonStdTen = 0.484480526260539;

TEST(GaussianEpsilonTest, Examples) {
  DpSpec spec;
  auto five = GaussianEpsilon(spec, 5.0);
  ASSERT_TRUE(five.ok());
  EXPECT_NEAR(five->epsilon, kEpsilonStdFive, 1e-14);
  EXPECT_TRUE(five->valid);
  auto ten = GaussianEpsilon(spec, 10.0);
  ASSERT_TRUE(ten.ok());
  EXPECT_NEAR(ten->epsilon, kEpsilonStdTen, 1e-14);
  EXPECT_EQ(ten->epsilon, five->epsilon / 2.0);
  EXPECT_FALSE(GaussianEpsilon(spec, 1.0)->valid);
}

TEST(GaussianEpsilonTest, Errors) {
  DpSpec spec;
  EXPECT_EQ(GaussianEpsilon(spec, 0.0).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(GaussianEpsilon(spec, -1.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(GaussianEpsilon({1.0, 1.0}, 1.0).ok());
  EXPECT_FALSE(GaussianEpsilon({1e-5, 0.0}, 1.0).ok());
}

TEST(GaussianEpsilonTest, MonotoneInStdAndSensitivity) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int i = 0; i < 1000; ++i) {
    DpSpec spec{std::pow(10.0, -1.0 - 9.0 * u(rng) / 10.0), u(rng)};
    const double s = u(rng);
    const double eps = GaussianEpsilon(spec, s)->epsilon;
    EXPECT_GT(eps, GaussianEpsilon(spec, s * 1.01)->epsilon);
    DpSpec bigger = spec;
    bigger.sensitivity *= 1.01;
    EXPECT_LT(eps, GaussianEpsilon(bigger, s)->epsilon);
    EXPECT_EQ(GaussianEpsilon(spec, 2.0 * s)->epsilon, eps / 2.0);
    const double product =
        spec.sensitivity * std::sqrt(2.0 * std::log(1.25 / spec.delta));
    EXPECT_NEAR(eps * s, product, 1e-12 * product);
  }
}

TEST(DpScalingTest, Examples) {
  DpSpec spec;
  std::vector<std::pair<double, double>> swap{{1, 0}, {0, 1}};
  auto a = CheckDpScaling(spec, swap);
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a->rows[0].epsilon, a->rows[1].epsilon);

  std::vector<std::pair<double, double>> line{{1, 0}, {2, 0}, {3, 0}};
  auto b = CheckDpScaling(spec, line);
  ASSERT_TRUE(b.ok());
  EXPECT_LE(b->max_relative_deviation, 1e-12);
  EXPECT_EQ(b->rows.size(), 3u);
  EXPECT_EQ(b->rows[2].index, 2);

  std::vector<std::pair<double, double>> additive{{1, 1}, {std::sqrt(2.0), 0}};
  auto c = CheckDpScaling(spec, additive);
  ASSERT_TRUE(c.ok());
  EXPECT_NEAR(c->rows[0].epsilon, c->rows[1].epsilon, 1e-15);
  EXPECT_NEAR(c->rows[0].combined_std, std::sqrt(2.0), 1e-15);
}

TEST(DpScalingTest, RejectsNoiselessPair) {
  std::vector<std::pair<double, double>> pairs{{1, 0}, {0, 0}};
  auto r = CheckDpScaling(DpSpec{}, pairs);
  EXPECT_EQ(r.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(r.status().message().find("pair 1"), absl::string_view::npos);
}

}  // namespace
}  // namespace obfuscation
