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
#include <string_view>
#include <variant>

namespace fastbelief::optim {

enum class OptimizerKind {
  sgd_momentum,
  adam,
  yogi,
  adabound,
  adabelief,
  sadam,
  fastadabelief,
};

inline constexpr OptimizerKind kAllOptimizers[] = {
    OptimizerKind::sgd_momentum, OptimizerKind::adam,  OptimizerKind::yogi,
    OptimizerKind::adabound,     OptimizerKind::adabelief, OptimizerKind::sadam,
    OptimizerKind::fastadabelief,
};

std::string_view to_string(OptimizerKind kind);
/// Throws InvalidArgument on an unknown name.
OptimizerKind parse_optimizer_kind(std::string_view name);

/// Whether the kind adds the vanishing term delta/t to a linear divisor.
bool uses_vanishing_factor(OptimizerKind kind);

/// beta2 held fixed at `value`.
struct ConstantBeta2 {
  double value = 0.999;
};

/// beta2_t = 1 - c / t.
struct ScheduledBeta2 {
  double c = 0.9;
};

using Beta2Mode = std::variant<ConstantBeta2, ScheduledBeta2>;

enum class StepSchedule { inverse_t, inverse_sqrt_t, constant };

std::string_view to_string(StepSchedule schedule);
StepSchedule parse_step_schedule(std::string_view name);

/// Clip-bound parameters for AdaBound: eta_l(t) = final_rate (1 - 1/(gamma t + 1)),
/// eta_u(t) = final_rate (1 + 1/(gamma t)).
struct AdaBoundBounds {
  double final_rate = 0.1;
  double gamma = 1e-3;
};

struct HyperParams {
  double alpha = 0.001;
  double beta1 = 0.9;
  double lambda = 1.0;  ///< beta1_t = beta1 * lambda^t
  Beta2Mode beta2 = ConstantBeta2{};
  double delta = 0.0;
  double epsilon = 1e-8;
  StepSchedule schedule = StepSchedule::inverse_sqrt_t;
  AdaBoundBounds adabound{};

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
  /// validate() plus the per-kind rule that delta > 0 wherever delta/t is the
  /// only guard against a zero divisor.
  void validate_for(OptimizerKind kind) const;

  double alpha_t(std::uint64_t t) const;
  double beta1_t(std::uint64_t t) const;
  double beta2_t(std::uint64_t t) const;

  /// Experiment defaults for `kind` with base stepsize `alpha`.
  static HyperParams defaults_for(OptimizerKind kind, double alpha);
};

std::string describe(const Beta2Mode& mode);

}  // namespace fastbelief::optim
