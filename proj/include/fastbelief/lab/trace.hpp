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
#include <optional>
#include <vector>

#include "fastbelief/common.hpp"
#include "fastbelief/optim/hyperparams.hpp"
#include "fastbelief/optim/region.hpp"
#include "fastbelief/problems/problem.hpp"

namespace fastbelief::lab {

/// Scalars recorded at every round t. Running quantities cover rounds 1..t.
struct StepRecord {
  std::uint64_t t = 0;
  double loss = 0.0;      ///< f_t(x_t)
  double cum_loss = 0.0;  ///< sum_{j<=t} f_j(x_j)
  double grad_inf = 0.0;  ///< |g_t|_inf
  double step_inf = 0.0;  ///< |Delta_t|_inf, pre-projection
  double alpha_t = 0.0;
  double beta1_t = 0.0;
  double beta2_t = 0.0;
  /// min / max over i of (t/a) sqrt(s_t,i) - ((t-1)/a) sqrt(s_{t-1},i)
  double cond4_min = 0.0;
  double cond4_max = 0.0;
  /// min over i of s_hat_t,i / alpha_t - s_hat_{t-1},i / alpha_{t-1}; the t=1
  /// term uses s_hat_0 = 0.
  double gamma_min = 0.0;
  /// smallest zeta satisfying the accumulated-gradient condition at t
  double cond3_zeta = 0.0;
  double g_inf_running = 0.0;
  double sum_g_norms_running = 0.0;  ///< sum_i sqrt(sum_{j<=t} g_j,i^4)
  double r_running = 0.0;            ///< max_{j<=t,i} (s_hat_j,i + delta/j)^(-1/2)
};

/// Full vectors at one round: x_t and g_t as seen by the learner, and the
/// momenta after the update.
struct DenseRecord {
  std::uint64_t t = 0;
  Vector x;
  Vector g;
  Vector m;
  Vector s;
  Vector s_hat;
};

struct TrajectoryTrace {
  optim::OptimizerKind kind = optim::OptimizerKind::fastadabelief;
  optim::HyperParams hp;
  std::uint64_t seed = 0;
  std::size_t stride = 1;
  Vector x0;
  Vector x_final;  ///< x_{T+1}
  std::vector<StepRecord> steps;
  std::vector<DenseRecord> dense;

  std::size_t length() const noexcept { return steps.size(); }
  /// True when `dense` holds every round 1..T.
  bool has_full_series() const noexcept;
};

struct RunOptions {
  std::optional<Vector> x0;           ///< default: the origin clipped into the region
  std::optional<std::size_t> stride;  ///< default: 1 for T <= 10^4, else 10
  bool keep_dense = true;
};

/// Stride used when none is given.
std::size_t default_stride(std::uint64_t rounds);

/// Geometric checkpoints 2^k for 2^k >= first, up to `rounds`, with `rounds`
/// appended when it is not a power of two. Empty when rounds < first.
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t rounds, std::uint64_t first = 128);

/**
 * Plays `rounds` rounds of the online game: at round t the learner at x_t
 * suffers f_t(x_t), observes g_t, and takes one optimizer step. Dense records
 * are kept every `stride` rounds plus round 1, the geometric checkpoints and
 * round T. Throws NumericError carrying t if a loss or gradient is not finite.
 */
TrajectoryTrace run_online(const problems::ProblemInstance& problem, optim::OptimizerKind kind,
                           const optim::HyperParams& hp, const optim::FeasibleRegion& region,
                           std::uint64_t rounds, std::uint64_t seed, const RunOptions& options = {});

}  // namespace fastbelief::lab
