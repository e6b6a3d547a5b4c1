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

#include "fastbelief/optim/hyperparams.hpp"

#include <fmt/format.h>

#include <cmath>

#include "fastbelief/common.hpp"

namespace fastbelief::optim {

namespace {

struct KindName {
  OptimizerKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {OptimizerKind::sgd_momentum, "sgd_momentum"}, {OptimizerKind::adam, "adam"},
    {OptimizerKind::yogi, "yogi"},                 {OptimizerKind::adabound, "adabound"},
    {OptimizerKind::adabelief, "adabelief"},       {OptimizerKind::sadam, "sadam"},
    {OptimizerKind::fastadabelief, "fastadabelief"},
};

void check(bool ok, std::string_view field, const std::string& rule) {
  if (!ok) throw InvalidArgument(fmt::format("hyperparameter {}: {}", field, rule));
}

}  // namespace

std::string_view to_string(OptimizerKind kind) {
  for (const auto& entry : kKindNames) {
    if (entry.kind == kind) return entry.name;
  }
  return "unknown";
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
  for (const auto& entry : kKindNames) {
    if (entry.name == name) return entry.kind;
  }
  if (name == "sgd") return OptimizerKind::sgd_momentum;
  throw InvalidArgument(fmt::format("unknown optimizer '{}'", name));
}

bool uses_vanishing_factor(OptimizerKind kind) {
  return kind == OptimizerKind::fastadabelief || kind == OptimizerKind::sadam;
}

std::string_view to_string(StepSchedule schedule) {
  switch (schedule) {
    case StepSchedule::inverse_t:
      return "inverse_t";
    case StepSchedule::inverse_sqrt_t:
      return "inverse_sqrt_t";
    case StepSchedule::constant:
      return "constant";
  }
  return "unknown";
}

StepSchedule parse_step_schedule(std::string_view name) {
  if (name == "inverse_t") return StepSchedule::inverse_t;
  if (name == "inverse_sqrt_t") return StepSchedule::inverse_sqrt_t;
  if (name == "constant") return StepSchedule::constant;
  throw InvalidArgument(fmt::format("unknown step schedule '{}'", name));
}

void HyperParams::validate() const {
  check(std::isfinite(alpha) && alpha > 0, "alpha", "must be positive and finite");
  check(beta1 >= 0 && beta1 < 1, "beta1", "must lie in [0, 1)");
  check(lambda > 0 && lambda <= 1, "lambda", "must lie in (0, 1]");
  check(std::isfinite(delta) && delta >= 0, "delta", "must be nonnegative");
  check(std::isfinite(epsilon) && epsilon >= 0, "epsilon", "must be nonnegative");
  if (const auto* c = std::get_if<ConstantBeta2>(&beta2)) {
    check(c->value >= 0 && c->value < 1, "beta2", "constant beta2 must lie in [0, 1)");
  } else {
    const auto& s = std::get<ScheduledBeta2>(beta2);
    check(s.c > 0 && s.c < 1, "beta2", "scheduled coefficient c must lie in (0, 1)");
  }
  check(adabound.final_rate > 0, "adabound_final_rate", "must be positive");
  check(adabound.gamma > 0, "adabound_gamma", "must be positive");
}

void HyperParams::validate_for(OptimizerKind kind) const {
  validate();
  if (uses_vanishing_factor(kind)) {
    check(delta > 0, "delta",
          fmt::format("must be positive for {} (the divisor is s_hat + delta/t)", to_string(kind)));
  }
}

double HyperParams::alpha_t(std::uint64_t t) const {
  const auto tt = static_cast<double>(t);
  switch (schedule) {
    case StepSchedule::inverse_t:
      return alpha / tt;
    case StepSchedule::inverse_sqrt_t:
      return alpha / std::sqrt(tt);
    case StepSchedule::constant:
      return alpha;
  }
  return alpha;
}

double HyperParams::beta1_t(std::uint64_t t) const {
  if (lambda == 1.0) return beta1;
  return beta1 * std::pow(lambda, static_cast<double>(t));
}

double HyperParams::beta2_t(std::uint64_t t) const {
  if (const auto* c = std::get_if<ConstantBeta2>(&beta2)) return c->value;
  return 1.0 - std::get<ScheduledBeta2>(beta2).c / static_cast<double>(t);
}

HyperParams HyperParams::defaults_for(OptimizerKind kind, double alpha) {
  HyperParams hp;
  hp.alpha = alpha;
  hp.beta1 = 0.9;
  hp.lambda = 1.0;
  switch (kind) {
    case OptimizerKind::sgd_momentum:
      hp.epsilon = 0.0;
      hp.schedule = StepSchedule::inverse_sqrt_t;
      break;
    case OptimizerKind::adam:
    case OptimizerKind::adabound:
    case OptimizerKind::adabelief:
      hp.beta2 = ConstantBeta2{0.999};
      hp.epsilon = 1e-8;
      hp.schedule = StepSchedule::inverse_sqrt_t;
      break;
    case OptimizerKind::yogi:
      hp.beta2 = ConstantBeta2{0.999};
      hp.epsilon = 1e-3;
      hp.schedule = StepSchedule::inverse_sqrt_t;
      break;
    case OptimizerKind::sadam:
    case OptimizerKind::fastadabelief:
      hp.beta2 = ScheduledBeta2{0.9};
      hp.delta = 0.1;
      hp.epsilon = 0.0;
      hp.schedule = StepSchedule::inverse_t;
      break;
  }
  return hp;
}

std::string describe(const Beta2Mode& mode) {
  if (const auto* c = std::get_if<ConstantBeta2>(&mode)) return fmt::format("{}", c->value);
  return fmt::format("sadam:{}", std::get<ScheduledBeta2>(mode).c);
}

}  // namespace fastbelief::optim
