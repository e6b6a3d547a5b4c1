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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fastbelief/common.hpp"
#include "fastbelief/optim/hyperparams.hpp"
#include "fastbelief/optim/region.hpp"
#include "fastbelief/problems/problem.hpp"

namespace fastbelief::report {

struct ProblemConfig {
  problems::ProblemKind kind = problems::ProblemKind::quadratic;
  std::uint64_t seed = 1;  ///< data / matrix generation
  // quadratic
  std::size_t dimension = 10;
  double eig_min = 0.1;
  double eig_max = 1.0;
  double minimizer_scale = 2.0;
  double noise = 0.1;
  std::optional<double> sigma;
  // softmax_l2; an empty dataset path means synthetic blobs
  std::filesystem::path dataset;
  std::size_t classes = 10;
  std::size_t features = 20;
  std::size_t samples = 2000;
  double separation = 1.0;
  double sigma1 = 0.01;
  double sigma2 = 0.01;
  std::size_t batch_size = 32;
  problems::SamplingMode sampling = problems::SamplingMode::with_replacement;
};

/// One [optimizer] section: a kind, its hyperparameters, and an alpha grid.
struct OptimizerConfig {
  optim::OptimizerKind kind = optim::OptimizerKind::fastadabelief;
  std::vector<double> alphas;
  optim::HyperParams hp;  ///< alpha is overwritten per cell
};

struct RunConfig {
  std::uint64_t rounds = 1000;
  std::uint64_t seed = 7;
  std::vector<std::uint64_t> checkpoints;  ///< empty: geometric from checkpoint_first
  std::uint64_t checkpoint_first = 128;
  double region_lo = -5.0;
  double region_hi = 5.0;
  std::filesystem::path out = "out";
  std::optional<std::size_t> stride;  ///< empty: automatic
};

struct ExperimentConfig {
  ProblemConfig problem;
  std::vector<OptimizerConfig> optimizers;
  RunConfig run;

  problems::ProblemInstance build_problem() const;
  optim::FeasibleRegion build_region(std::size_t dimension) const;
  std::vector<std::uint64_t> resolved_checkpoints() const;
};

/**
 * Parses the sectioned `key = value` format (see README). Relative dataset
 * paths resolve against the directory holding the file. Throws ParseError
 * with the line number on syntax errors and unknown keys, InvalidArgument on
 * semantic violations.
 */
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::filesystem::path& base_dir = ".");

}  // namespace fastbelief::report
