// Copyright 2026 The fastbelief Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fastbelief/report/config.hpp"

namespace fastbelief::report {

/// Process exit codes; nothing else is ever returned.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitCheckFailed = 4,
};

enum class AlphaSelection { final_loss, final_regret };

AlphaSelection parse_alpha_selection(std::string_view name);

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;    ///< overrides [run] out
  std::optional<std::uint64_t> seed;           ///< overrides [run] seed
  AlphaSelection select = AlphaSelection::final_loss;
  std::optional<std::filesystem::path> trace;  ///< check / bound input
  std::optional<double> r;                     ///< bound: user-supplied r
  std::size_t jobs = 0;                        ///< worker threads; 0 = hardware
  bool color = false;
};

/// One (optimizer, alpha) pair of a sweep.
struct Cell {
  std::size_t optimizer = 0;  ///< index into ExperimentConfig::optimizers
  std::string label;          ///< optimizer name, suffixed when a kind repeats
  optim::OptimizerKind kind = optim::OptimizerKind::fastadabelief;
  optim::HyperParams hp;
};

std::vector<Cell> expand_cells(const ExperimentConfig& cfg);
std::string trace_file_name(const Cell& cell);

/// Each command writes its report to `out` and returns an ExitCode. Library
/// exceptions propagate; `run_command` maps them to exit codes.
int cmd_run(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_compare(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_check(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_bound(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_probe(const CommandOptions& opt, std::ostream& out);

/// Loads the config when needed, runs `command`, prints errors to `err`.
int run_command(const std::string& command, const CommandOptions& opt, std::ostream& out,
                std::ostream& err);

/// True when colour is allowed: `NO_COLOR` unset or empty and stdout is a tty.
bool color_allowed();

}  // namespace fastbelief::report
