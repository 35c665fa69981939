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

#include "obfuscation/commands.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "obfuscation/dp_calibration.h"
#include "obfuscation/erm_lab.h"
#include "obfuscation/mfg_solver.h"
#include "obfuscation/stackelberg_solver.h"

namespace obfuscation {
namespace {

using Json = nlohmann::ordered_json;

// Pass thresholds for the validate summary.
constexpr double kMinRSquared = 0.9;
constexpr double kRatioBandLow = 0.6;   // relative to the expected ratio
constexpr double kRatioBandHigh = 1.4;  // 0.5 * [0.6, 1.4] = [0.3, 0.7]
constexpr double kDpDeviation = 1e-12;

std::string CsvLine(const std::vector<std::string>& fields) {
  return absl::StrCat(absl::StrJoin(fields, ","), "\n");
}

Json JsonNumber(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

std::string Dump(const Json& json) { return json.dump(2) + "\n"; }

absl::StatusOr<GameParams> ValidGame(const RunConfig& config) {
  auto game = RequireGame(config);
  if (!game.ok()) return game.status();
  if (auto status = game->Validate(); !status.ok()) return status;
  return game;
}

absl::Status RequireNoSweep(const RunConfig& config, std::string_view command) {
  if (config.sweep.empty()) return absl::OkStatus();
  return absl::InvalidArgumentError(absl::StrCat(
      std::string(command), " takes no sweep.* keys; use the sweep command"));
}

absl::Status RequireSigmaL(const RunConfig& config, const GameParams& game) {
  if (!(config.sigma_l >= 0.0 && config.sigma_l <= game.m)) {
    return absl::InvalidArgumentError(
        absl::StrCat("learner.sigma_L must lie in [0, M=", game.m, "], got ",
                     config.sigma_l));
  }
  return absl::OkStatus();
}

std::string OptionalNumber(const std::optional<double>& value) {
  return value ? FormatNumber(*value) : "";
}

std::string Quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <typename Fn>
void ParallelFor(size_t count, int jobs, Fn&& fn) {
  const int workers =
      static_cast<int>(std::min<size_t>(std::max(1, jobs), count));
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // also folds -0
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

absl::StatusOr<CommandResult> RunSolve(const RunConfig& config) {
  if (auto status = RequireNoSweep(config, "solve"); !status.ok()) {
    return status;
  }
  auto game = ValidGame(config);
  if (!game.ok()) return game.status();
  auto report = SolvePbne(*game);
  if (!report.ok()) return report.status();

  const EquilibriumReport& r = *report;
  CommandResult result;
  if (config.format == OutputFormat::kCsv) {
    std::string csv = CsvLine({"regime", "sigma_L_dagger", "sigma_bar_dagger",
                               "U_L", "U_S", "tau_hat", "tau_exact", "kappa",
                               "accuracy_margin", "promise_threshold",
                               "scan_sigma_L", "scan_U_L", "diagnostics"});
    csv += CsvLine(
        {std::string(RegimeName(r.regime)), FormatNumber(r.sigma_l_dagger),
         FormatNumber(r.sigma_bar_dagger),
         FormatNumber(r.learner_utility_at_eq),
         FormatNumber(r.user_utility_at_eq),
         OptionalNumber(r.thresholds.tau_hat),
         OptionalNumber(r.thresholds.tau_exact),
         FormatNumber(r.conditions.kappa),
         FormatNumber(r.conditions.accuracy_margin),
         FormatNumber(r.conditions.promise_threshold),
         FormatNumber(r.scan->best_sigma_l), FormatNumber(r.scan->best_utility),
         Quote(absl::StrJoin(r.diagnostics, "; "))});
    result.files.emplace_back("solve.csv", csv);
  } else {
    Json json;
    json["regime"] = RegimeName(r.regime);
    json["sigma_L_dagger"] = r.sigma_l_dagger;
    json["sigma_bar_dagger"] = r.sigma_bar_dagger;
    json["U_L"] = r.learner_utility_at_eq;
    json["U_S"] = r.user_utility_at_eq;
    json["tau_hat"] =
        r.thresholds.tau_hat ? Json(*r.thresholds.tau_hat) : nullptr;
    json["tau_exact"] =
        r.thresholds.tau_exact ? Json(*r.thresholds.tau_exact) : nullptr;
    json["kappa"] = r.conditions.kappa;
    json["accuracy_margin"] = r.conditions.accuracy_margin;
    json["promise_threshold"] = JsonNumber(r.conditions.promise_threshold);
    json["scan"] = {{"sigma_L", r.scan->best_sigma_l},
                    {"U_L", r.scan->best_utility},
                    {"cell", r.scan->cell}};
    json["crossings"] = r.thresholds.crossings;
    json["diagnostics"] = r.diagnostics;
    result.files.emplace_back("solve.json", Dump(json));
  }
  result.summary =
      absl::StrCat("regime=", std::string(RegimeName(r.regime)),
                   " sigma_L_dagger=", FormatNumber(r.sigma_l_dagger),
                   " sigma_bar_dagger=", FormatNumber(r.sigma_bar_dagger),
                   " U_L=", FormatNumber(r.learner_utility_at_eq));
  return result;
}

absl::StatusOr<CommandResult> RunSweep(const RunConfig& config) {
  if (config.sweep.empty()) {
    return absl::InvalidArgumentError("sweep needs at least one sweep.* range");
  }
  auto base = RequireGame(config);
  if (!base.ok()) return base.status();

  std::vector<std::vector<double>> axes;
  double total = 1.0;
  for (const SweepAxis& axis : config.sweep) {
    axes.push_back(axis.Values());
    total *= static_cast<double>(axes.back().size());
  }
  if (total > static_cast<double>(config.sweep_max_points)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sweep grid has ", static_cast<int64_t>(total),
        " points, above sweep.max_points=", config.sweep_max_points,
        "; set sweep.max_points >= ", static_cast<int64_t>(total)));
  }
  const size_t points = static_cast<size_t>(total);

  // Row-major over the axes in config order: the first axis varies slowest.
  auto point_values = [&](size_t index) {
    std::vector<double> values(axes.size());
    for (size_t a = axes.size(); a-- > 0;) {
      values[a] = axes[a][index % axes[a].size()];
      index /= axes[a].size();
    }
    return values;
  };

  std::vector<std::string> rows(points);
  std::vector<Json> json_rows(config.format == OutputFormat::kJson ? points
                                                                   : 0);
  std::vector<absl::Status> errors(points);
  ParallelFor(points, config.jobs, [&](size_t i) {
    const std::vector<double> values = point_values(i);
    GameParams params = *base;
    for (size_t a = 0; a < values.size(); ++a) {
      if (auto s = SetGameValue(params, config.sweep[a].key, values[a]);
          !s.ok()) {
        errors[i] = s;
        return;
      }
    }
    if (auto s = params.Validate(); !s.ok()) {
      errors[i] = absl::InvalidArgumentError(
          absl::StrCat("grid point ", i, ": ", s.message()));
      return;
    }
    const EquilibriumReport r = ClassifyRegime(params);
    if (config.format == OutputFormat::kCsv) {
      std::vector<std::string> fields;
      for (double v : values) fields.push_back(FormatNumber(v));
      fields.push_back(std::string(RegimeName(r.regime)));
      fields.push_back(FormatNumber(r.sigma_l_dagger));
      fields.push_back(FormatNumber(r.sigma_bar_dagger));
      fields.push_back(FormatNumber(r.learner_utility_at_eq));
      fields.push_back(OptionalNumber(r.thresholds.tau_hat));
      rows[i] = CsvLine(fields);
    } else {
      Json row;
      for (size_t a = 0; a < values.size(); ++a) {
        row[config.sweep[a].key] = values[a];
      }
      row["regime"] = RegimeName(r.regime);
      row["sigma_L_dagger"] = JsonNumber(r.sigma_l_dagger);
      row["sigma_bar_dagger"] = r.sigma_bar_dagger;
      row["U_L"] = JsonNumber(r.learner_utility_at_eq);
      row["tau_hat"] =
          r.thresholds.tau_hat ? Json(*r.thresholds.tau_hat) : nullptr;
      json_rows[i] = std::move(row);
    }
  });
  for (const absl::Status& s : errors) {
    if (!s.ok()) return s;
  }

  CommandResult result;
  if (config.format == OutputFormat::kCsv) {
    std::vector<std::string> header;
    for (const SweepAxis& axis : config.sweep) header.push_back(axis.key);
    for (const char* c :
         {"regime", "sigma_L_dagger", "sigma_bar_dagger", "U_L", "tau_hat"}) {
      header.push_back(c);
    }
    std::string csv = CsvLine(header);
    for (const std::string& row : rows) csv += row;
    result.files.emplace_back("sweep.csv", std::move(csv));
  } else {
    Json json = Json::array();
    for (Json& row : json_rows) json.push_back(std::move(row));
    result.files.emplace_back("sweep.json", Dump(json));
  }
  result.summary = absl::StrCat(points, " grid points classified");
  return result;
}

absl::StatusOr<CommandResult> RunBrCurve(const RunConfig& config) {
  if (auto status = RequireNoSweep(config, "br-curve"); !status.ok()) {
    return status;
  }
  if (!config.has_sigma_l) {
    return absl::InvalidArgumentError("missing required key learner.sigma_L");
  }
  auto game = ValidGame(config);
  if (!game.ok()) return game.status();
  if (auto s = RequireSigmaL(config, *game); !s.ok()) return s;

  const std::vector<BrCurvePoint> curve =
      BrCurve(*game, config.sigma_l, config.br_points);
  auto response = [&](const BestResponse& br) -> std::string {
    switch (br.kind) {
      case ResponseKind::kZero:
        return "0";
      case ResponseKind::kMax:
        return FormatNumber(game->m);
      case ResponseKind::kIndifferent:
        return "indifferent";
    }
    return "";
  };
  CommandResult result;
  int switches = 0;
  for (size_t i = 1; i < curve.size(); ++i) {
    switches += curve[i].response.kind != curve[i - 1].response.kind;
  }
  if (config.format == OutputFormat::kCsv) {
    std::string csv = CsvLine({"sigma_bar_other", "response"});
    for (const BrCurvePoint& p : curve) {
      csv += CsvLine({FormatNumber(p.sigma_bar_other), response(p.response)});
    }
    result.files.emplace_back("br_curve.csv", std::move(csv));
  } else {
    Json json = Json::array();
    for (const BrCurvePoint& p : curve) {
      Json r;
      r["sigma_bar_other"] = p.sigma_bar_other;
      if (p.response.kind == ResponseKind::kIndifferent) {
        r["response"] = "indifferent";
      } else {
        r["response"] = p.response.kind == ResponseKind::kZero ? 0.0 : game->m;
      }
      r["margin"] = p.response.margin;
      json.push_back(std::move(r));
    }
    result.files.emplace_back("br_curve.json", Dump(json));
  }
  result.summary =
      absl::StrCat(curve.size(), " points, ", switches, " response changes");
  return result;
}

absl::StatusOr<CommandResult> RunCascade(const RunConfig& config) {
  if (auto status = RequireNoSweep(config, "cascade"); !status.ok()) {
    return status;
  }
  auto game = ValidGame(config);
  if (!game.ok()) return game.status();
  if (auto s = RequireSigmaL(config, *game); !s.ok()) return s;

  CascadeOptions options;
  options.sigma_l = config.sigma_l;
  options.seed_fraction = config.cascade_seed_fraction;
  options.schedule = config.cascade_schedule;
  options.rng_seed = config.seed;
  options.max_rounds = config.cascade_max_rounds;
  auto trace = SimulateCascade(*game, options);
  if (!trace.ok()) return trace.status();

  const double m2 = game->m * game->m;
  auto bits = [](const std::vector<uint8_t>& state) {
    std::string out(state.size(), '0');
    for (size_t i = 0; i < state.size(); ++i) {
      if (state[i]) out[i] = '1';
    }
    return out;
  };
  CommandResult result;
  if (config.format == OutputFormat::kCsv) {
    std::string csv =
        CsvLine({"round", "adoption_fraction", "mean_variance", "state"});
    for (size_t r = 0; r < trace->rounds.size(); ++r) {
      const double f = trace->adoption_fraction[r];
      csv += CsvLine({absl::StrCat(r), FormatNumber(f), FormatNumber(f * m2),
                      bits(trace->rounds[r])});
    }
    result.files.emplace_back("cascade.csv", std::move(csv));
  } else {
    Json json;
    json["converged"] = trace->converged;
    json["rounds"] = Json::array();
    for (size_t r = 0; r < trace->rounds.size(); ++r) {
      const double f = trace->adoption_fraction[r];
      json["rounds"].push_back({{"round", r},
                                {"adoption_fraction", f},
                                {"mean_variance", f * m2},
                                {"state", bits(trace->rounds[r])}});
    }
    result.files.emplace_back("cascade.json", Dump(json));
  }
  result.summary =
      absl::StrCat(trace->converged ? "converged" : "did not converge",
                   " after ", trace->passes(), " passes; adoption ",
                   FormatNumber(trace->adoption_fraction.back()));
  return result;
}

absl::StatusOr<CommandResult> RunValidate(const RunConfig& config) {
  if (!config.has_erm && !config.has_dp) {
    return absl::InvalidArgumentError(
        "validate needs an erm.* or dp.* section in the config");
  }
  CommandResult result;
  std::vector<std::string> lines;

  if (config.has_erm) {
    const ErmSettings& e = config.erm;
    ScalingConfig scaling;
    scaling.n = e.n;
    scaling.generator = {e.d, e.separation};
    scaling.erm.rho = e.rho;
    scaling.erm.loss = e.loss;
    scaling.n_ref = e.n_ref;
    scaling.n_eval = e.n_eval;
    scaling.replications = e.replications;
    scaling.rng_seed = config.seed;
    scaling.jobs = config.jobs;
    std::vector<NoiseProfile> levels;
    for (double v : e.levels) {
      if (v < 0.0) {
        return absl::InvalidArgumentError(
            absl::StrCat("erm.levels must be >= 0, got ", v));
      }
      const double s = std::sqrt(v / 2.0);
      levels.push_back({s, s, s});
    }
    auto report = RunScalingExperiment(scaling, levels);
    if (!report.ok()) return report.status();

    if (config.format == OutputFormat::kCsv) {
      std::string csv = CsvLine({"level_index", "v", "mean_excess_risk",
                                 "std_error", "replications"});
      for (size_t l = 0; l < report->levels.size(); ++l) {
        const LevelResult& r = report->levels[l];
        csv +=
            CsvLine({absl::StrCat(l), FormatNumber(r.v),
                     FormatNumber(r.mean_excess_risk),
                     FormatNumber(r.std_error), absl::StrCat(r.replications)});
      }
      result.files.emplace_back("erm_scaling.csv", std::move(csv));
    } else {
      Json json;
      json["slope"] = report->slope;
      json["intercept"] = report->intercept;
      json["r_squared"] = report->r_squared;
      json["rank_correlation"] = report->rank_correlation;
      json["levels"] = Json::array();
      for (size_t l = 0; l < report->levels.size(); ++l) {
        const LevelResult& r = report->levels[l];
        json["levels"].push_back({{"level_index", l},
                                  {"v", r.v},
                                  {"mean_excess_risk", r.mean_excess_risk},
                                  {"std_error", r.std_error},
                                  {"replications", r.replications}});
      }
      result.files.emplace_back("erm_scaling.json", Dump(json));
    }
    const bool fit_ok =
        report->r_squared >= kMinRSquared && report->rank_correlation == 1.0;
    lines.push_back(absl::StrCat(
        "erm fit: slope=", FormatNumber(report->slope),
        " r_squared=", FormatNumber(report->r_squared), " rank_correlation=",
        FormatNumber(report->rank_correlation), " ", fit_ok ? "PASS" : "FAIL"));
    result.passed &= fit_ok;

    if (e.compare_n > 0) {
      ScalingConfig other = scaling;
      other.n = e.compare_n;
      auto second = RunScalingExperiment(other, levels);
      if (!second.ok()) return second.status();
      const double ratio = second->slope / report->slope;
      const double expected =
          static_cast<double>(e.n) / static_cast<double>(e.compare_n);
      const bool ratio_ok = ratio >= kRatioBandLow * expected &&
                            ratio <= kRatioBandHigh * expected;
      lines.push_back(absl::StrCat("erm slope ratio N=", e.compare_n,
                                   "/N=", e.n, ": ", FormatNumber(ratio),
                                   " (expected ", FormatNumber(expected), ") ",
                                   ratio_ok ? "PASS" : "FAIL"));
      result.passed &= ratio_ok;
    }
  }

  if (config.has_dp) {
    auto report = CheckDpScaling({config.dp.delta, config.dp.sensitivity},
                                 config.dp.pairs);
    if (!report.ok()) return report.status();
    if (config.format == OutputFormat::kCsv) {
      std::string csv = CsvLine({"pair_index", "sigma_L", "sigma_S",
                                 "combined_std", "epsilon", "valid"});
      for (const DpScalingRow& r : report->rows) {
        csv += CsvLine({absl::StrCat(r.index), FormatNumber(r.sigma_l),
                        FormatNumber(r.sigma_s), FormatNumber(r.combined_std),
                        FormatNumber(r.epsilon), r.valid ? "true" : "false"});
      }
      result.files.emplace_back("dp_scaling.csv", std::move(csv));
    } else {
      Json json;
      json["constant"] = report->constant;
      json["max_relative_deviation"] = report->max_relative_deviation;
      json["pairs"] = Json::array();
      for (const DpScalingRow& r : report->rows) {
        json["pairs"].push_back({{"pair_index", r.index},
                                 {"sigma_L", r.sigma_l},
                                 {"sigma_S", r.sigma_s},
                                 {"combined_std", r.combined_std},
                                 {"epsilon", r.epsilon},
                                 {"valid", r.valid}});
      }
      result.files.emplace_back("dp_scaling.json", Dump(json));
    }
    const bool dp_ok = report->max_relative_deviation <= kDpDeviation;
    lines.push_back(
        absl::StrCat("dp: constant=", FormatNumber(report->constant),
                     " max_relative_deviation=",
                     FormatNumber(report->max_relative_deviation), " ",
                     dp_ok ? "PASS" : "FAIL"));
    result.passed &= dp_ok;
  }

  lines.push_back(absl::StrCat("overall: ", result.passed ? "PASS" : "FAIL"));
  result.summary = absl::StrJoin(lines, "\n");
  result.files.emplace_back("summary.txt", result.summary + "\n");
  return result;
}

absl::Status WriteResult(const std::string& dir, const CommandResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat(
        "cannot create output directory '", dir, "': ", ec.message()));
  }
  for (const auto& [name, contents] : result.files) {
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << contents;
    if (!out) {
      return absl::UnavailableError(
          absl::StrCat("cannot write '", path.string(), "'"));
    }
  }
  return absl::OkStatus();
}

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return 2;
    default:
      return 1;
  }
}

}  // namespace obfuscation
