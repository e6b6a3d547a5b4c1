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

#include "fastbelief/lab/trace.hpp"

namespace fastbelief::lab {

struct HindsightOptions {
  double tolerance = 1e-10;           ///< on |projected gradient step|_inf
  std::size_t max_iterations = 1000000;
  std::optional<Vector> start;        ///< default: origin clipped into the region
};

struct HindsightResult {
  Vector x_star;
  double value = 0.0;     ///< sum_{t<=T'} f_t(x_star)
  std::size_t iterations = 0;
  double residual = 0.0;  ///< final |x - proj(x - grad/L)|_inf
};

/**
 * Minimizes sum_{t<=rounds} f_t over the region, replaying the same loss
 * sequence the learner saw. Uses accelerated projected gradient with step 1/L
 * and adaptive restart; stops once a plain projected-gradient step from the
 * iterate is at most `tolerance` in the inf-norm. Throws ConvergenceError with
 * the last iterate and residual when the cap is hit.
 */
HindsightResult best_in_hindsight(const problems::ProblemInstance& problem,
                                  const optim::FeasibleRegion& region, std::uint64_t rounds,
                                  std::uint64_t seed, const HindsightOptions& options = {});

/// Same, over all rounds of `trace` with the trace's seed.
HindsightResult best_in_hindsight(const problems::ProblemInstance& problem,
                                  const optim::FeasibleRegion& region,
                                  const TrajectoryTrace& trace,
                                  const HindsightOptions& options = {});

/// R ~ a + b * phi(T) with its coefficient of determination.
struct LinearFit {
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
};

struct GrowthFits {
  LinearFit log_fit;   ///< phi = ln T
  LinearFit sqrt_fit;  ///< phi = sqrt T
};

/// Least squares against (1, ln T) and (1, sqrt T). Needs >= 4 strictly
/// increasing checkpoints.
GrowthFits fit_growth(const std::vector<std::uint64_t>& checkpoints, const Vector& regret);

struct RegretReport {
  std::vector<std::uint64_t> checkpoints;
  Vector cumulative_loss;  ///< learner's sum up to each checkpoint
  Vector hindsight_values; ///< comparator's sum up to each checkpoint
  Vector regret;
  Vector ratio;            ///< R(T') / T'
  Vector hindsight_x_star; ///< minimizer for the last checkpoint
  double hindsight_value = 0.0;
  std::optional<GrowthFits> fits;  ///< present with >= 4 checkpoints
};

/// R(T') = sum_{t<=T'} f_t(x_t) - min_x sum_{t<=T'} f_t(x), the comparator
/// re-solved for every prefix.
RegretReport compute_regret(const problems::ProblemInstance& problem,
                            const optim::FeasibleRegion& region, const TrajectoryTrace& trace,
                            const std::vector<std::uint64_t>& checkpoints,
                            const HindsightOptions& options = {});

}  // namespace fastbelief::lab
