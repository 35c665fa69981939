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

// Regularized empirical risk minimization on synthetic data perturbed by both
// the users and the learner, and Monte-Carlo measurement of the excess
// expected loss that the perturbation causes.

#ifndef OBFUSCATION_ERM_LAB_H_
#define OBFUSCATION_ERM_LAB_H_

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "obfuscation/core_model.h"

namespace obfuscation {

// Rows of `features` are records; labels are +1 or -1.
struct Dataset {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;

  int n() const { return static_cast<int>(features.rows()); }
  int d() const { return static_cast<int>(features.cols()); }
  absl::Status Validate() const;
};

// Class-conditional Gaussian model: y uniform on {-1, +1},
// x | y ~ N(y * (separation, 0, ..., 0), I_d).
struct GeneratorParams {
  int d = 1;
  double separation = 1.0;
};

absl::StatusOr<Dataset> GenerateSynthetic(int n, const GeneratorParams& gen,
                                          uint64_t rng_seed);

struct PerturbationSpec {
  double sigma_l = 0.0;
  std::vector<double> sigma_s_per_user;  // one entry per record
  uint64_t rng_seed = 0;
};

// x~_i = x_i + v_i + w_i with v_i ~ N(0, sigma_S^i^2 I), w_i ~ N(0, sigma_L^2
// I).
absl::StatusOr<Dataset> PerturbDataset(const Dataset& data,
                                       const PerturbationSpec& spec);

enum class Loss {
  // log(1 + exp(-y f.x))
  kLogistic,
  // 1 - y f.x. Linear in the features, so zero-mean input noise leaves the
  // expected gradient unchanged.
  kUnhinged,
};

std::string_view LossName(Loss loss);
absl::StatusOr<Loss> ParseLoss(std::string_view name);

struct ErmConfig {
  double rho = 1.0;
  Loss loss = Loss::kLogistic;
  int max_iters = 10000;
  double grad_tolerance = 1e-8;

  absl::Status Validate() const;
};

struct Classifier {
  Eigen::VectorXd weights;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::vector<double> objective_history;  // objective after each iterate
};

// rho/2 |f|^2 + mean loss.
double ErmObjective(const Dataset& data, const ErmConfig& config,
                    const Eigen::VectorXd& weights);
Eigen::VectorXd ErmGradient(const Dataset& data, const ErmConfig& config,
                            const Eigen::VectorXd& weights);

// Gradient descent from f = 0 with Barzilai-Borwein trial steps and monotone
// backtracking. Stops when the gradient norm reaches grad_tolerance
// (converged = true) or after max_iters.
absl::StatusOr<Classifier> ErmFit(const Dataset& data, const ErmConfig& config);

// Approximates the population minimizer f* by fitting n_ref clean samples.
absl::StatusOr<Classifier> ReferenceClassifier(const GeneratorParams& gen,
                                               const ErmConfig& config,
                                               int n_ref, uint64_t rng_seed);

struct ExcessRiskEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

// Paired Monte-Carlo estimate of
//   E[rho R(f_d) + l(Z, f_d)] - E[rho R(f*) + l(Z, f*)]
// over the records of `eval`.
ExcessRiskEstimate EstimateExcessRisk(const Classifier& f_d,
                                      const Classifier& f_star,
                                      const ErmConfig& config,
                                      const Dataset& eval);

// Same, on n_eval fresh clean records drawn from the generator.
absl::StatusOr<ExcessRiskEstimate> EstimateExcessRisk(
    const Classifier& f_d, const Classifier& f_star, const ErmConfig& config,
    const GeneratorParams& gen, int n_eval, uint64_t rng_seed);

struct ScalingConfig {
  int n = 500;  // records per training set, one per user
  GeneratorParams generator{5, 1.0};
  ErmConfig erm{0.1, Loss::kUnhinged, 10000, 1e-8};
  int n_ref = 100000;
  int n_eval = 100000;
  int replications = 50;
  uint64_t rng_seed = 0;
  int jobs = 1;
};

struct LevelResult {
  NoiseProfile noise;
  double v = 0.0;  // sigma_L^2 + (N-1)/N sigma_bar^2 + 1/N sigma_S^2
  double mean_excess_risk = 0.0;
  double std_error = 0.0;
  int replications = 0;
};

struct ScalingReport {
  std::vector<LevelResult> levels;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double rank_correlation = 0.0;
};

// Variance aggregate v for N users.
double VarianceAggregate(const NoiseProfile& noise, int n);

// Measures the mean excess risk at each noise level (record 0 perturbs with
// sigma_S, the other records with sigma_bar_other, all with sigma_L) and
// regresses it on v.
absl::StatusOr<ScalingReport> RunScalingExperiment(
    const ScalingConfig& config, std::span<const NoiseProfile> levels);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares; FailedPrecondition when all x are equal.
absl::StatusOr<LinearFit> FitLine(std::span<const double> x,
                                  std::span<const double> y);

// Spearman rank correlation with average ranks for ties.
double RankCorrelation(std::span<const double> x, std::span<const double> y);

}  // namespace obfuscation

#endif  // OBFUSCATION_ERM_LAB_H_
