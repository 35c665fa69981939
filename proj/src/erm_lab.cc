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

#include "obfuscation/erm_lab.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "absl/strings/str_cat.h"
#include "obfuscation/seeding.h"

namespace obfuscation {
namespace {

// Stream indices fed to MixSeed; fixed so experiments stay reproducible.
constexpr uint64_t kReferenceStream = 0x5245465f;  // "REF_"
constexpr uint64_t kEvalStream = 0x4556414c;       // "EVAL"
constexpr uint64_t kTrainStream = 1;
constexpr uint64_t kNoiseStream = 2;

constexpr double kArmijo = 0.5;
constexpr double kMinStep = 1e-20;
constexpr double kMaxStep = 1e20;

double LossValue(Loss loss, double margin) {
  if (loss == Loss::kUnhinged) return 1.0 - margin;
  // log(1 + exp(-m)) without overflow.
  return margin > 0.0 ? std::log1p(std::exp(-margin))
                      : -margin + std::log1p(std::exp(margin));
}

// d loss / d margin.
double LossSlope(Loss loss, double margin) {
  if (loss == Loss::kUnhinged) return -1.0;
  return margin > 0.0 ? -std::exp(-margin) / (1.0 + std::exp(-margin))
                      : -1.0 / (1.0 + std::exp(margin));
}

Eigen::VectorXd Margins(const Dataset& data, const Eigen::VectorXd& weights) {
  return data.labels.cwiseProduct(data.features * weights);
}

// Per-record regularized loss rho/2 |f|^2 + l(z_i, f).
Eigen::VectorXd RecordObjectives(const Dataset& data, const ErmConfig& config,
                                 const Eigen::VectorXd& weights) {
  const Eigen::VectorXd margins = Margins(data, weights);
  const double reg = 0.5 * config.rho * weights.squaredNorm();
  Eigen::VectorXd out(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    out[i] = reg + LossValue(config.loss, margins[i]);
  }
  return out;
}

std::vector<double> Ranks(std::span<const double> values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]])
      ++j;
    const double average = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = average;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

absl::Status Dataset::Validate() const {
  if (labels.size() != features.rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dataset has ", features.rows(), " feature rows but ",
                     labels.size(), " labels"));
  }
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("label ", i, " is ", labels[i], ", expected +1 or -1"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Dataset> GenerateSynthetic(int n, const GeneratorParams& gen,
                                          uint64_t rng_seed) {
  if (n < 2 || gen.d < 1 || !(gen.separation >= 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "generator needs n >= 2, d >= 1, separation >= 0; got n=", n,
        ", d=", gen.d, ", separation=", gen.separation));
  }
  std::mt19937_64 rng(rng_seed);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset data;
  data.features.resize(n, gen.d);
  data.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const double y = coin(rng) ? 1.0 : -1.0;
    data.labels[i] = y;
    for (int k = 0; k < gen.d; ++k) data.features(i, k) = normal(rng);
    data.features(i, 0) += y * gen.separation;
  }
  return data;
}

absl::StatusOr<Dataset> PerturbDataset(const Dataset& data,
                                       const PerturbationSpec& spec) {
  if (static_cast<int>(spec.sigma_s_per_user.size()) != data.n()) {
    return absl::InvalidArgumentError(
        absl::StrCat("perturbation has ", spec.sigma_s_per_user.size(),
                     " user deviations for ", data.n(), " records"));
  }
  const bool negative =
      spec.sigma_l < 0.0 ||
      std::any_of(
          spec.sigma_s_per_user.begin(), spec.sigma_s_per_user.end(),
          [](double s) { return !(s >= 0.0); });
  if (negative) {
    return absl::InvalidArgumentError("noise deviations must be >= 0");
  }
  Dataset out = data;
  std::mt19937_64 rng(spec.rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < data.n(); ++i) {
    const double sigma_s = spec.sigma_s_per_user[i];
    for (int k = 0; k < data.d(); ++k) {
      const double v = normal(rng);
      const double w = normal(rng);
      out.features(i, k) += sigma_s * v + spec.sigma_l * w;
    }
  }
  return out;
}

std::string_view LossName(Loss loss) {
  return loss == Loss::kLogistic ? "logistic" : "unhinged";
}

absl::StatusOr<Loss> ParseLoss(std::string_view name) {
  if (name == "logistic") return Loss::kLogistic;
  if (name == "unhinged") return Loss::kUnhinged;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown loss '", std::string(name),
                   "' (expected logistic or unhinged)"));
}

absl::Status ErmConfig::Validate() const {
  if (!(rho > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("rho must be > 0, got ", rho));
  }
  if (!(grad_tolerance > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("grad_tolerance must be > 0, got ", grad_tolerance));
  }
  if (max_iters < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("max_iters must be >= 1, got ", max_iters));
  }
  return absl::OkStatus();
}

double ErmObjective(const Dataset& data, const ErmConfig& config,
                    const Eigen::VectorXd& weights) {
  const Eigen::VectorXd margins = Margins(data, weights);
  double total = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    total += LossValue(config.loss, margins[i]);
  }
  return 0.5 * config.rho * weights.squaredNorm() + total / data.n();
}

Eigen::VectorXd ErmGradient(const Dataset& data, const ErmConfig& config,
                            const Eigen::VectorXd& weights) {
  const Eigen::VectorXd margins = Margins(data, weights);
  Eigen::VectorXd coeff(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    coeff[i] = data.labels[i] * LossSlope(config.loss, margins[i]);
  }
  return config.rho * weights +
         data.features.transpose() * coeff / static_cast<double>(data.n());
}

absl::StatusOr<Classifier> ErmFit(const Dataset& data,
                                  const ErmConfig& config) {
  if (auto status = config.Validate(); !status.ok()) return status;
  if (auto status = data.Validate(); !status.ok()) return status;

  Classifier fit;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(data.d());
  double objective = ErmObjective(data, config, w);
  Eigen::VectorXd grad = ErmGradient(data, config, w);
  fit.objective_history.push_back(objective);
  double step = 1.0;
  for (int it = 0; it < config.max_iters; ++it) {
    const double grad_sq = grad.squaredNorm();
    if (std::sqrt(grad_sq) <= config.grad_tolerance) {
      fit.converged = true;
      break;
    }
    Eigen::VectorXd candidate;
    Eigen::VectorXd candidate_grad;
    double candidate_objective = objective;
    bool accepted = false;
    while (step >= kMinStep) {
      candidate = w - step * grad;
      candidate_objective = ErmObjective(data, config, candidate);
      if (candidate_objective <= objective - kArmijo * step * grad_sq) {
        candidate_grad = ErmGradient(data, config, candidate);
        accepted = true;
        break;
      }
      // Near the optimum the required decrease drops below the resolution
      // of the objective; accept a step that does not increase it and
      // shrinks the gradient.
      if (candidate_objective <= objective) {
        candidate_grad = ErmGradient(data, config, candidate);
        if (candidate_grad.squaredNorm() < grad_sq) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no representable decrease left
    // Barzilai-Borwein guess for the next trial step.
    const Eigen::VectorXd s_k = candidate - w;
    const double curvature = s_k.dot(candidate_grad - grad);
    step = curvature > 0.0
               ? std::clamp(s_k.squaredNorm() / curvature, kMinStep, kMaxStep)
               : 2.0 * step;
    w = std::move(candidate);
    grad = std::move(candidate_grad);
    objective = candidate_objective;
    fit.objective_history.push_back(objective);
    fit.iterations = it + 1;
  }
  fit.gradient_norm = grad.norm();
  if (!fit.converged && fit.gradient_norm <= config.grad_tolerance) {
    fit.converged = true;
  }
  fit.weights = std::move(w);
  return fit;
}

absl::StatusOr<Classifier> ReferenceClassifier(const GeneratorParams& gen,
                                               const ErmConfig& config,
                                               int n_ref, uint64_t rng_seed) {
  auto data = GenerateSynthetic(n_ref, gen, rng_seed);
  if (!data.ok()) return data.status();
  return ErmFit(*data, config);
}

ExcessRiskEstimate EstimateExcessRisk(const Classifier& f_d,
                                      const Classifier& f_star,
                                      const ErmConfig& config,
                                      const Dataset& eval) {
  const Eigen::VectorXd diff = RecordObjectives(eval, config, f_d.weights) -
                               RecordObjectives(eval, config, f_star.weights);
  const double n = static_cast<double>(diff.size());
  const double mean = diff.mean();
  const double var = (diff.array() - mean).square().sum() / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

absl::StatusOr<ExcessRiskEstimate> EstimateExcessRisk(
    const Classifier& f_d, const Classifier& f_star, const ErmConfig& config,
    const GeneratorParams& gen, int n_eval, uint64_t rng_seed) {
  auto eval = GenerateSynthetic(n_eval, gen, rng_seed);
  if (!eval.ok()) return eval.status();
  return EstimateExcessRisk(f_d, f_star, config, *eval);
}

double VarianceAggregate(const NoiseProfile& noise, int n) {
  const double nn = static_cast<double>(n);
  return noise.sigma_l * noise.sigma_l +
         (nn - 1.0) / nn * noise.sigma_bar_other * noise.sigma_bar_other +
         noise.sigma_s * noise.sigma_s / nn;
}

absl::StatusOr<LinearFit> FitLine(std::span<const double> x,
                                  std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    return absl::InvalidArgumentError("regression needs >= 2 paired points");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) {
    return absl::FailedPreconditionError(
        "degenerate regression: all variance levels are equal");
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

double RankCorrelation(std::span<const double> x, std::span<const double> y) {
  const std::vector<double> rx = Ranks(x);
  const std::vector<double> ry = Ranks(y);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

absl::StatusOr<ScalingReport> RunScalingExperiment(
    const ScalingConfig& config, std::span<const NoiseProfile> levels) {
  if (auto status = config.erm.Validate(); !status.ok()) return status;
  std::vector<double> v(levels.size());
  for (size_t l = 0; l < levels.size(); ++l) {
    v[l] = VarianceAggregate(levels[l], config.n);
  }
  if (!v.empty() && std::all_of(v.begin(), v.end(),
                                [&](double x) { return x == v.front(); })) {
    return absl::FailedPreconditionError(
        "degenerate regression: all variance levels are equal");
  }
  if (std::set<double>(v.begin(), v.end()).size() < 4) {
    return absl::InvalidArgumentError(
        "scaling experiment needs at least 4 distinct variance levels");
  }
  if (config.replications < 10) {
    return absl::InvalidArgumentError(
        absl::StrCat("scaling experiment needs >= 10 replications, got ",
                     config.replications));
  }
  if (config.n < 2 || config.n_eval < 1000 || config.n_ref < 2) {
    return absl::InvalidArgumentError(
        "scaling experiment needs n >= 2, n_ref >= 2 and n_eval >= 1000");
  }

  auto f_star = ReferenceClassifier(config.generator, config.erm, config.n_ref,
                                    MixSeed(config.rng_seed, kReferenceStream));
  if (!f_star.ok()) return f_star.status();
  auto eval = GenerateSynthetic(config.n_eval, config.generator,
                                MixSeed(config.rng_seed, kEvalStream));
  if (!eval.ok()) return eval.status();

  const size_t tasks = levels.size() * config.replications;
  std::vector<absl::StatusOr<double>> results(tasks, 0.0);
  auto run_task = [&](size_t task) {
    const NoiseProfile& noise = levels[task / config.replications];
    const uint64_t task_seed = MixSeed(config.rng_seed, task);
    auto clean = GenerateSynthetic(config.n, config.generator,
                                   MixSeed(task_seed, kTrainStream));
    if (!clean.ok()) {
      results[task] = clean.status();
      return;
    }
    PerturbationSpec spec;
    spec.sigma_l = noise.sigma_l;
    spec.sigma_s_per_user.assign(config.n, noise.sigma_bar_other);
    spec.sigma_s_per_user[0] = noise.sigma_s;
    spec.rng_seed = MixSeed(task_seed, kNoiseStream);
    auto noisy = PerturbDataset(*clean, spec);
    if (!noisy.ok()) {
      results[task] = noisy.status();
      return;
    }
    auto f_d = ErmFit(*noisy, config.erm);
    if (!f_d.ok()) {
      results[task] = f_d.status();
      return;
    }
    results[task] = EstimateExcessRisk(*f_d, *f_star, config.erm, *eval).value;
  };

  const int jobs =
      std::max(1, std::min<int>(config.jobs, static_cast<int>(tasks)));
  if (jobs == 1) {
    for (size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::vector<std::thread> workers;
    for (int j = 0; j < jobs; ++j) {
      workers.emplace_back([&, j] {
        for (size_t t = j; t < tasks; t += jobs) run_task(t);
      });
    }
    for (auto& worker : workers) worker.join();
  }

  ScalingReport report;
  std::vector<double> means;
  for (size_t l = 0; l < levels.size(); ++l) {
    std::vector<double> samples;
    for (int r = 0; r < config.replications; ++r) {
      const auto& result = results[l * config.replications + r];
      if (!result.ok()) return result.status();
      samples.push_back(*result);
    }
    const double n = static_cast<double>(samples.size());
    const double mean =
        std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    LevelResult level;
    level.noise = levels[l];
    level.v = v[l];
    level.mean_excess_risk = mean;
    level.std_error = std::sqrt(ss / (n - 1.0) / n);
    level.replications = config.replications;
    report.levels.push_back(level);
    means.push_back(mean);
  }
  auto fit = FitLine(v, means);
  if (!fit.ok()) return fit.status();
  report.slope = fit->slope;
  report.intercept = fit->intercept;
  report.r_squared = fit->r_squared;
  report.rank_correlation = RankCorrelation(v, means);
  return report;
}

}  // namespace obfuscation
