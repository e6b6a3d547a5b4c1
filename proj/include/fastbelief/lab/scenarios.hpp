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
#include <string>
#include <vector>

#include "fastbelief/common.hpp"
#include "fastbelief/optim/hyperparams.hpp"

namespace fastbelief::lab {

/// A scripted scalar gradient sequence exercising one curvature regime.
struct RegionScenario {
  int region = 0;
  std::string name;
  Vector gradients;  ///< g_1 .. g_L
};

/**
 * The three regimes:
 *   1  small g, small change:  g = 1e-3 * scale, constant
 *   2  large g, large change:  g = +-scale, alternating (starts at +)
 *   3  large g, small change:  g = scale, constant
 */
std::vector<RegionScenario> region_scenarios(std::size_t length, double scale = 1.0);

/// Frozen exponential averages after feeding `gradients[0..t)`.
struct FrozenMoments {
  double m = 0.0;  ///< EMA of g with beta1
  double v = 0.0;  ///< EMA of g^2 with beta2
  double s = 0.0;  ///< EMA of (g - m)^2 with beta2
};

FrozenMoments freeze_moments(const Vector& gradients, std::uint64_t t, double beta1 = 0.9,
                             double beta2 = 0.999);

/// The five optimizers with a closed-form stepsize formula.
inline constexpr optim::OptimizerKind kProbeOptimizers[] = {
    optim::OptimizerKind::sgd_momentum, optim::OptimizerKind::adam, optim::OptimizerKind::sadam,
    optim::OptimizerKind::adabelief, optim::OptimizerKind::fastadabelief};

struct ProbeRow {
  int region = 0;
  std::string region_name;
  std::uint64_t t = 0;
  optim::OptimizerKind kind = optim::OptimizerKind::fastadabelief;
  double m = 0.0;
  double second_moment = 0.0;  ///< v for the Adam family, s for the belief family
  double step_abs = 0.0;       ///< |Delta_t|
};

struct ProbeSettings {
  std::vector<std::uint64_t> steps{10, 100, 1000};
  double alpha = 0.01;
  double delta = 0.1;
  double scale = 1.0;
};

/// |Delta_t| of every probe optimizer on every scenario at every requested t,
/// each with its own default hyperparameters (own schedule) at `alpha`.
std::vector<ProbeRow> probe_table(const ProbeSettings& settings = {});

}  // namespace fastbelief::lab
