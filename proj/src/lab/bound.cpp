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

#include "fastbelief/lab/bound.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fastbelief::lab {

std::string describe(RRule rule) {
  return rule == RRule::measured_default
             ? "default: r = max_{t,i} (s_hat_{t,i} + delta/t)^(-1/2), measured on the trace"
             : "user-supplied r";
}

BoundConstants measure_constants(const TrajectoryTrace& trace, const optim::FeasibleRegion& region,
                                 std::uint64_t upto, std::optional<double> r) {
  if (trace.steps.empty()) throw InvalidArgument("measure_constants needs a nonempty trace");
  if (upto == 0) upto = trace.length();
  if (upto > trace.length()) {
    throw InvalidArgument(fmt::format("prefix {} exceeds trace length {}", upto, trace.length()));
  }
  const auto& last = trace.steps[upto - 1];
  BoundConstants c;
  c.d_inf = region.diameter_inf();
  c.g_inf = last.g_inf_running;
  c.sum_g_norms = last.sum_g_norms_running;
  c.n = region.dimension();
  c.rounds = static_cast<double>(upto);
  c.alpha = trace.hp.alpha;
  c.beta1 = trace.hp.beta1;
  c.lambda = trace.hp.lambda;
  c.delta = trace.hp.delta;
  if (r) {
    if (!(*r > 0) || !std::isfinite(*r)) throw InvalidArgument("r must be positive and finite");
    c.r = *r;
    c.r_rule = RRule::user_supplied;
  } else {
    c.r = last.r_running;
    c.r_rule = RRule::measured_default;
  }
  return c;
}

BoundTerms bound_terms(const BoundConstants& c) {
  if (!(c.alpha > 0)) throw InvalidArgument("bound: alpha must be positive");
  if (!(c.beta1 >= 0 && c.beta1 < 1)) throw InvalidArgument("bound: beta1 must lie in [0, 1)");
  if (!(c.lambda > 0 && c.lambda <= 1)) throw InvalidArgument("bound: lambda must lie in (0, 1]");
  if (!(c.rounds >= 1)) throw InvalidArgument("bound: T must be >= 1");
  for (double v : {c.d_inf, c.g_inf, c.r, c.sum_g_norms, c.delta}) {
    if (!std::isfinite(v) || v < 0) {
      throw InvalidArgument("bound: constants must be finite and nonnegative");
    }
  }
  if (c.lambda == 1.0 && c.beta1 > 0) {
    throw InvalidArgument(
        "bound: the lambda-term n b1 lam D^2 (G + delta) / (2a(1-b1)(1-lam)^2) is undefined at "
        "lambda = 1 with beta1 > 0");
  }
  const auto n = static_cast<double>(c.n);
  const double one_b1 = 1.0 - c.beta1;
  const double d2 = c.d_inf * c.d_inf;
  BoundTerms b;
  b.delta_term = n * c.delta * d2 / (2 * c.alpha * one_b1);
  b.log_term = c.alpha * c.r * c.r * std::log(c.rounds) /
               (one_b1 * one_b1) * c.sum_g_norms;
  b.constant_term = (2 * c.alpha * c.r * c.r + c.alpha * c.delta * c.delta) /
                    (2 * one_b1 * one_b1) * c.sum_g_norms;
  if (c.beta1 > 0) {
    const double one_l = 1.0 - c.lambda;
    b.lambda_term = n * c.beta1 * c.lambda * d2 * (c.g_inf + c.delta) /
                    (2 * c.alpha * one_b1 * one_l * one_l);
  }
  b.total = b.delta_term + b.log_term + b.constant_term + b.lambda_term;
  return b;
}

double theoretical_bound(const BoundConstants& c) { return bound_terms(c).total; }

}  // namespace fastbelief::lab
