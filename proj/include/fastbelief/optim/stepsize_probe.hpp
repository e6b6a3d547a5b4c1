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

namespace fastbelief::optim {

/**
 * Displacement an optimizer would take from a frozen (m, s) at step t, using
 * the closed-form stepsize comparison formulas:
 *
 *   sgd_momentum   -a_t m
 *   adam           -a_t m / (sqrt(s) + eps)
 *   sadam          -a_t m / sqrt(s + delta/t)
 *   adabelief      -a_t m / (sqrt(s) + eps)
 *   fastadabelief  -a_t m / sqrt(s + delta/t)
 *
 * with a_t = hp.alpha_t(t). `s` is v for the Adam family and the belief
 * second moment for the belief family. Yogi and AdaBound have no entry in that
 * comparison and are rejected.
 */
Vector stepsize_probe(OptimizerKind kind, ConstVectorView m, ConstVectorView s, std::uint64_t t,
                      const HyperParams& hp);

}  // namespace fastbelief::optim
