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
#include <vector>

#include "fastbelief/lab/trace.hpp"

namespace fastbelief::lab {

/// Which pair of trajectory conditions to evaluate. `strongly_convex` uses the
/// multiplier t/alpha and the upper band sigma(1 - beta1); `standard` is the
/// older sqrt(t)/alpha form with only the lower side.
enum class ConditionVariant { strongly_convex, standard };

struct Condition4Report {
  double upper = 0.0;  ///< sigma (1 - beta1), +inf for the standard variant
  Vector lhs_min;      ///< per step, min over coordinates
  Vector lhs_max;      ///< per step, max over coordinates
  bool pass = true;
  std::uint64_t first_failure = 0;  ///< 0 when everything passes
};

struct Condition3Report {
  Vector zeta;             ///< smallest feasible zeta at each step
  double zeta_max = 0.0;   ///< the condition holds up to T with this zeta
};

struct GammaReport {
  Vector per_step;         ///< min over i at each step
  double min = 0.0;
  std::uint64_t argmin = 0;
};

/**
 * Increment (m(t)/a) sqrt(s_t,i) - (m(t-1)/a) sqrt(s_{t-1},i) with m(t) = t or
 * sqrt(t); passes when every increment lies in [0, sigma(1 - beta1) + 1e-12].
 * Needs the full per-round s-series (throws InvalidArgument on a thinned
 * trace).
 */
Condition4Report check_condition4(const TrajectoryTrace& trace, double sigma,
                                  ConditionVariant variant = ConditionVariant::strongly_convex);

/**
 * zeta*(t) = max_i sqrt(sum_{j<=t} g_j,i^2) / ((m(t)/a) sqrt(W_t,i)) with
 * W_t = beta2_t W_{t-1} + (1 - beta2_t) g_t^2, i.e. the beta2-product-weighted
 * sum carried forward in O(1) per step. Coordinates with no gradient so far
 * are skipped; zero weight with a nonzero gradient gives +inf.
 */
Condition3Report check_condition3(const TrajectoryTrace& trace,
                                  ConditionVariant variant = ConditionVariant::strongly_convex);

/// min over t, i of s_hat_t,i / alpha_t - s_hat_{t-1},i / alpha_{t-1}, with
/// s_hat_0 = 0. Needs the full s_hat-series.
GammaReport check_gamma_psd(const TrajectoryTrace& trace);

}  // namespace fastbelief::lab
