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

#include "fastbelief/common.hpp"
#include "fastbelief/optim/hyperparams.hpp"
#include "fastbelief/optim/region.hpp"

namespace fastbelief::optim {

/**
 * Per-trajectory optimizer state.
 *
 * `s` is the second-order momentum: the EMA of the squared belief residual
 * (g - m)^2 for the belief optimizers, the EMA of g^2 (v) for the Adam family.
 * `s_hat` is the running elementwise maximum of `s` for every kind; only the
 * belief optimizers divide by it.
 */
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::fastadabelief;
  std::uint64_t t = 0;
  Vector m;
  Vector s;
  Vector s_hat;
  Vector x;
};

struct StepOutcome {
  Vector x_next;
  Vector delta_applied;   ///< pre-projection displacement
  Vector stepsize_scale;  ///< elementwise multiplier applied to m
};

struct StepResult {
  OptimizerState state;
  StepOutcome outcome;
};

/// Zero momenta, t = 0, x = x0. Throws if x0 is outside the region.
OptimizerState init_state(OptimizerKind kind, ConstVectorView x0, const FeasibleRegion& region);

StepResult fastadabelief_step(const OptimizerState& state, ConstVectorView g,
                              const HyperParams& hp, const FeasibleRegion& region);
StepResult adabelief_step(const OptimizerState& state, ConstVectorView g, const HyperParams& hp,
                          const FeasibleRegion& region);
StepResult sadam_step(const OptimizerState& state, ConstVectorView g, const HyperParams& hp,
                      const FeasibleRegion& region);
StepResult adam_step(const OptimizerState& state, ConstVectorView g, const HyperParams& hp,
                     const FeasibleRegion& region);
StepResult sgd_momentum_step(const OptimizerState& state, ConstVectorView g,
                             const HyperParams& hp, const FeasibleRegion& region);
StepResult yogi_step(const OptimizerState& state, ConstVectorView g, const HyperParams& hp,
                     const FeasibleRegion& region);
StepResult adabound_step(const OptimizerState& state, ConstVectorView g, const HyperParams& hp,
                         const FeasibleRegion& region);

/// Dispatches on state.kind.
StepResult step(const OptimizerState& state, ConstVectorView g, const HyperParams& hp,
                const FeasibleRegion& region);

}  // namespace fastbelief::optim
