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
#include <string>

#include "fastbelief/lab/trace.hpp"

namespace fastbelief::lab {

enum class RRule { measured_default, user_supplied };

std::string describe(RRule rule);

/// Constants entering the closed-form regret bound.
struct BoundConstants {
  double d_inf = 0.0;        ///< l-inf diameter of the region
  double g_inf = 0.0;        ///< max observed |g_t,i|
  double r = 0.0;
  RRule r_rule = RRule::measured_default;
  double sum_g_norms = 0.0;  ///< sum_i sqrt(sum_t g_t,i^4)
  std::size_t n = 0;
  double rounds = 0.0;  ///< T (real so the log term can be probed off the integers)
  double alpha = 0.0;
  double beta1 = 0.0;
  double lambda = 1.0;
  double delta = 0.0;
};

/**
 * Constants measured on the first `upto` rounds of the trace (all rounds when
 * 0). Without `r`, uses r = max_{t,i} (s_hat_t,i + delta/t)^(-1/2).
 */
BoundConstants measure_constants(const TrajectoryTrace& trace, const optim::FeasibleRegion& region,
                                 std::uint64_t upto = 0, std::optional<double> r = std::nullopt);

/// The four bound terms, in order; `total` is their sum.
struct BoundTerms {
  double delta_term = 0.0;
  double log_term = 0.0;
  double constant_term = 0.0;
  double lambda_term = 0.0;
  double total = 0.0;
};

/**
 *   n d D^2 / (2a(1-b1))
 * + a r^2 ln T / (1-b1)^2 * S
 * + (2a r^2 + a d^2) / (2(1-b1)^2) * S
 * + n b1 lam D^2 (G + d) / (2a(1-b1)(1-lam)^2)
 *
 * with S = sum_g_norms. lambda = 1 is accepted only with beta1 = 0, where the
 * last term is dropped.
 */
BoundTerms bound_terms(const BoundConstants& c);
double theoretical_bound(const BoundConstants& c);

}  // namespace fastbelief::lab
