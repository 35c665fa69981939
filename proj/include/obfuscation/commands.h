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

// Subcommands of the command-line harness. Each one renders its output files
// in memory so that callers can compare runs byte for byte before anything
// touches the disk.

#ifndef OBFUSCATION_COMMANDS_H_
#define OBFUSCATION_COMMANDS_H_

#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "obfuscation/run_config.h"

namespace obfuscation {

struct CommandResult {
  // (file name, contents) in the order they should be written.
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
  bool passed = true;
};

// Shortest decimal text that parses back to the same double; "inf", "-inf"
// and "nan" for non-finite values.
std::string FormatNumber(double value);

absl::StatusOr<CommandResult> RunSolve(const RunConfig& config);
absl::StatusOr<CommandResult> RunSweep(const RunConfig& config);
absl::StatusOr<CommandResult> RunBrCurve(const RunConfig& config);
absl::StatusOr<CommandResult> RunCascade(const RunConfig& config);
absl::StatusOr<CommandResult> RunValidate(const RunConfig& config);

// Creates `dir` if needed and writes every file of `result` into it.
absl::Status WriteResult(const std::string& dir, const CommandResult& result);

// 0 success, 1 internal inconsistency or failed validation, 2 usage or
// configuration error.
int ExitCodeFor(const absl::Status& status);

}  // namespace obfuscation

#endif  // OBFUSCATION_COMMANDS_H_
