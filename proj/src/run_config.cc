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

#include "obfuscation/run_config.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace obfuscation {
namespace {

const char* const kRequiredGameKeys[] = {"A_L", "C_L", "A_S", "P_S",
                                         "C_S", "rho", "N",   "M"};

// Local helpers on std::string_view; the system Abseil has its own
// string_view type.
std::string_view Trim(std::string_view s) {
  while (!s.empty() && absl::ascii_isspace(s.front())) s.remove_prefix(1);
  while (!s.empty() && absl::ascii_isspace(s.back())) s.remove_suffix(1);
  return s;
}

bool ConsumePrefix(std::string_view& s, std::string_view prefix) {
  if (s.substr(0, prefix.size()) != prefix) return false;
  s.remove_prefix(prefix.size());
  return true;
}

std::vector<std::string> Split(std::string_view text, char sep) {
  std::vector<std::string> parts =
      absl::StrSplit(std::string(text), sep, absl::SkipWhitespace());
  return parts;
}

absl::Status LineError(int line, std::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrCat("line ", line, ": ", std::string(message)));
}

absl::StatusOr<double> ParseDouble(std::string_view text) {
  double value;
  if (!absl::SimpleAtod(std::string(text), &value) || std::isnan(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", std::string(text), "' is not a number"));
  }
  return value;
}

absl::StatusOr<int64_t> ParseInt(std::string_view text) {
  int64_t value;
  if (!absl::SimpleAtoi(std::string(text), &value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", std::string(text), "' is not an integer"));
  }
  return value;
}

absl::StatusOr<int> ParseBoundedInt(std::string_view text, int64_t lo) {
  auto value = ParseInt(text);
  if (!value.ok()) return value.status();
  if (*value < lo || *value > std::numeric_limits<int>::max()) {
    return absl::InvalidArgumentError(
        absl::StrCat(*value, " is out of range (minimum ", lo, ")"));
  }
  return static_cast<int>(*value);
}

absl::StatusOr<std::vector<double>> ParseList(std::string_view text) {
  std::vector<double> out;
  for (const std::string& item : Split(text, ',')) {
    auto value = ParseDouble(Trim(item));
    if (!value.ok()) return value.status();
    out.push_back(*value);
  }
  if (out.empty()) return absl::InvalidArgumentError("empty list");
  return out;
}

// "sigma_L:sigma_S, sigma_L:sigma_S, ..."
absl::StatusOr<std::vector<std::pair<double, double>>> ParsePairs(
    std::string_view text) {
  std::vector<std::pair<double, double>> out;
  for (const std::string& item : Split(text, ',')) {
    std::vector<std::string> parts = absl::StrSplit(item, ':');
    if (parts.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("pair '", std::string(Trim(item)),
                       "' must look like sigma_L:sigma_S"));
    }
    auto a = ParseDouble(Trim(parts[0]));
    auto b = ParseDouble(Trim(parts[1]));
    if (!a.ok()) return a.status();
    if (!b.ok()) return b.status();
    out.emplace_back(*a, *b);
  }
  if (out.empty()) return absl::InvalidArgumentError("empty pair list");
  return out;
}

bool IsGameKey(std::string_view key) {
  for (const std::string& k : GameKeys()) {
    if (k == key) return true;
  }
  return false;
}

struct PartialAxis {
  std::optional<double> min, max;
  std::optional<int> steps;
  int line = 0;
};

}  // namespace

absl::StatusOr<OutputFormat> ParseOutputFormat(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown format '", std::string(name), "' (expected csv or json)"));
}

std::vector<double> SweepAxis::Values() const {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    double v = steps == 1 ? min
               : k == steps - 1
                   ? max
                   : min + (max - min) * k / static_cast<double>(steps - 1);
    if (key == "N") v = std::round(v);
    out.push_back(v);
  }
  return out;
}

const std::vector<std::string>& GameKeys() {
  static const auto* keys = new std::vector<std::string>{
      "A_L", "C_L", "A_S", "P_S", "C_S", "rho", "N", "M", "c_g", "c_p"};
  return *keys;
}

absl::Status SetGameValue(GameParams& params, std::string_view key,
                          double value) {
  if (key == "A_L") {
    params.a_l = value;
  } else if (key == "C_L") {
    params.c_l = value;
  } else if (key == "A_S") {
    params.a_s = value;
  } else if (key == "P_S") {
    params.p_s = value;
  } else if (key == "C_S") {
    params.c_s = value;
  } else if (key == "rho") {
    params.rho = value;
  } else if (key == "N") {
    if (value != std::round(value) || value < 1 || value > 1e9) {
      return absl::InvalidArgumentError(
          absl::StrCat("N must be a positive integer, got ", value));
    }
    params.n = static_cast<int>(value);
  } else if (key == "M") {
    params.m = value;
  } else if (key == "c_g") {
    params.conventions.c_g = value;
  } else if (key == "c_p") {
    params.conventions.c_p = value;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown game parameter '", std::string(key), "'"));
  }
  return absl::OkStatus();
}

absl::StatusOr<RunConfig> ParseRunConfig(std::string_view text) {
  RunConfig config;
  std::map<std::string, int> seen;
  std::map<std::string, PartialAxis> axes;
  std::vector<std::string> axis_order;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view body = raw;
    if (auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = Trim(body);
    if (body.empty()) continue;
    const size_t eq = body.find('=');
    if (eq == std::string_view::npos) {
      return LineError(line, "expected 'key = value'");
    }
    const std::string key(Trim(body.substr(0, eq)));
    const std::string value(Trim(body.substr(eq + 1)));
    if (key.empty()) return LineError(line, "missing key");
    if (value.empty()) {
      return LineError(line, absl::StrCat("missing value for '", key, "'"));
    }
    if (auto [it, inserted] = seen.emplace(key, line); !inserted) {
      return LineError(
          line, absl::StrCat("duplicate key '", key, "' (first set on line ",
                             it->second, ")"));
    }

    auto fail = [&](const absl::Status& status) {
      return LineError(line, absl::StrCat(key, ": ", status.message()));
    };
    auto number = [&]() { return ParseDouble(value); };

    std::string_view k = key;
    if (ConsumePrefix(k, "game.")) {
      if (k == "privacy_exponent") {
        if (value == "inverse_variance") {
          config.game.conventions.privacy_exponent =
              PrivacyExponent::kInverseVariance;
        } else if (value == "inverse_std") {
          config.game.conventions.privacy_exponent =
              PrivacyExponent::kInverseStd;
        } else {
          return LineError(line,
                           "game.privacy_exponent must be "
                           "inverse_variance or inverse_std");
        }
        continue;
      }
      if (!IsGameKey(k)) {
        return LineError(line, absl::StrCat("unknown key '", key, "'"));
      }
      auto v = number();
      if (!v.ok()) return fail(v.status());
      if (auto s = SetGameValue(config.game, k, *v); !s.ok()) return fail(s);
      config.game_keys.insert(std::string(k));
    } else if (ConsumePrefix(k, "sweep.")) {
      if (k == "max_points") {
        auto v = ParseInt(value);
        if (!v.ok()) return fail(v.status());
        if (*v < 1) return LineError(line, "sweep.max_points must be >= 1");
        config.sweep_max_points = *v;
        continue;
      }
      const size_t dot = k.rfind('.');
      const std::string param(k.substr(0, dot));
      const std::string_view field =
          dot == std::string_view::npos ? "" : k.substr(dot + 1);
      if (dot == std::string_view::npos || !IsGameKey(param) ||
          (field != "min" && field != "max" && field != "steps")) {
        return LineError(line, absl::StrCat("unknown key '", key, "'"));
      }
      if (!axes.count(param)) axis_order.push_back(param);
      PartialAxis& axis = axes[param];
      if (axis.line == 0) axis.line = line;
      if (field == "steps") {
        auto v = ParseInt(value);
        if (!v.ok()) return fail(v.status());
        if (*v < 1 || *v > std::numeric_limits<int>::max()) {
          return LineError(line, absl::StrCat(key,
                                              " must be >= 1 (empty "
                                              "sweep range)"));
        }
        axis.steps = static_cast<int>(*v);
      } else {
        auto v = number();
        if (!v.ok()) return fail(v.status());
        (field == "min" ? axis.min : axis.max) = *v;
      }
    } else if (key == "learner.sigma_L") {
      auto v = number();
      if (!v.ok()) return fail(v.status());
      config.sigma_l = *v;
      config.has_sigma_l = true;
    } else if (key == "br_curve.n_points") {
      auto v = ParseBoundedInt(value, 2);
      if (!v.ok()) return fail(v.status());
      config.br_points = *v;
    } else if (key == "cascade.seed_fraction") {
      auto v = number();
      if (!v.ok()) return fail(v.status());
      config.cascade_seed_fraction = *v;
    } else if (key == "cascade.schedule") {
      auto v = ParseUpdateSchedule(value);
      if (!v.ok()) return fail(v.status());
      config.cascade_schedule = *v;
    } else if (key == "cascade.max_rounds") {
      auto v = ParseBoundedInt(value, 1);
      if (!v.ok()) return fail(v.status());
      config.cascade_max_rounds = *v;
    } else if (ConsumePrefix(k, "erm.")) {
      config.has_erm = true;
      ErmSettings& e = config.erm;
      absl::Status status;
      if (k == "n" || k == "d" || k == "replications" || k == "n_ref" ||
          k == "n_eval" || k == "compare_n") {
        const int64_t lo = k == "replications" ? 10
                           : k == "d"          ? 1
                           : k == "compare_n"  ? 0
                           : k == "n_eval"     ? 1000
                                               : 2;
        auto v = ParseBoundedInt(value, lo);
        if (!v.ok()) return fail(v.status());
        int* target = k == "n"              ? &e.n
                      : k == "d"            ? &e.d
                      : k == "replications" ? &e.replications
                      : k == "n_ref"        ? &e.n_ref
                      : k == "n_eval"       ? &e.n_eval
                                            : &e.compare_n;
        *target = *v;
      } else if (k == "rho" || k == "separation") {
        auto v = number();
        if (!v.ok()) return fail(v.status());
        (k == "rho" ? e.rho : e.separation) = *v;
      } else if (k == "levels") {
        auto v = ParseList(value);
        if (!v.ok()) return fail(v.status());
        e.levels = *v;
      } else if (k == "loss") {
        auto v = ParseLoss(value);
        if (!v.ok()) return fail(v.status());
        e.loss = *v;
      } else {
        return LineError(line, absl::StrCat("unknown key '", key, "'"));
      }
    } else if (ConsumePrefix(k, "dp.")) {
      config.has_dp = true;
      if (k == "delta" || k == "sensitivity") {
        auto v = number();
        if (!v.ok()) return fail(v.status());
        (k == "delta" ? config.dp.delta : config.dp.sensitivity) = *v;
      } else if (k == "pairs") {
        auto v = ParsePairs(value);
        if (!v.ok()) return fail(v.status());
        config.dp.pairs = *v;
      } else {
        return LineError(line, absl::StrCat("unknown key '", key, "'"));
      }
    } else if (key == "output.dir") {
      config.output_dir = value;
    } else if (key == "output.format") {
      auto v = ParseOutputFormat(value);
      if (!v.ok()) return fail(v.status());
      config.format = *v;
    } else if (key == "seed") {
      uint64_t v;
      if (!absl::SimpleAtoi(value, &v)) {
        return LineError(line, "seed must be a non-negative integer");
      }
      config.seed = v;
    } else {
      return LineError(line, absl::StrCat("unknown key '", key, "'"));
    }
  }

  for (const std::string& param : axis_order) {
    const PartialAxis& a = axes[param];
    if (!a.min || !a.max || !a.steps) {
      return LineError(
          a.line, absl::StrCat("sweep.", param, " needs min, max and steps"));
    }
    if (*a.min > *a.max) {
      return LineError(a.line,
                       absl::StrCat("sweep.", param, " is empty: min > max"));
    }
    config.sweep.push_back({param, *a.min, *a.max, *a.steps});
  }
  return config;
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot read config '", path, "'"));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto config = ParseRunConfig(buffer.str());
  if (!config.ok()) {
    return absl::Status(config.status().code(),
                        absl::StrCat(path, ": ", config.status().message()));
  }
  return config;
}

absl::StatusOr<GameParams> RequireGame(const RunConfig& config) {
  for (const char* key : kRequiredGameKeys) {
    bool swept = false;
    for (const SweepAxis& axis : config.sweep) swept |= axis.key == key;
    if (!swept && !config.game_keys.count(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("missing required key game.", key));
    }
  }
  return config.game;
}

}  // namespace obfuscation
