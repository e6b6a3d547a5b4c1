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

#include "fastbelief/optim/optimizer.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fastbelief::optim {

namespace {

// Validates the inputs shared by every kernel and returns the new step index.
std::uint64_t begin_step(const OptimizerState& state, ConstVectorView g, OptimizerKind expected) {
  if (state.kind != expected) {
    throw InvalidArgument(fmt::format("{} step applied to a {} state", to_string(expected),
                                      to_string(state.kind)));
  }
  const std::size_t n = state.x.size();
  require_same_length(g.size(), n, "gradient");
  require_same_length(state.m.size(), n, "state.m");
  require_same_length(state.s.size(), n, "state.s");
  require_same_length(state.s_hat.size(), n, "state.s_hat");
  const std::uint64_t t = state.t + 1;
  if (!all_finite(g)) throw NumericError("non-finite gradient", t);
  return t;
}

StepResult finish_step(OptimizerState next, StepOutcome outcome) {
  if (!all_finite(next.m) || !all_finite(next.s) || !all_finite(next.s_hat) ||
      !all_finite(outcome.x_next) || !all_finite(outcome.delta_applied)) {
    throw NumericError(fmt::format("{} update produced a non-finite value", to_string(next.kind)),
                       next.t);
  }
  next.x = outcome.x_next;
  return StepResult{std::move(next), std::move(outcome)};
}

// m / divisor for a square-root style divisor that may be zero when eps = 0.
// A zero divisor is only acceptable where m is zero too (nothing to move).
double safe_ratio(double m, double divisor, std::uint64_t t) {
  if (divisor > 0) return m / divisor;
  if (m == 0.0) return 0.0;
  throw NumericError("second-moment divisor vanished with nonzero momentum", t);
}

// Projection weights for kernels whose divisor may be zero (eps = 0); the box
// projection ignores the weight values, zero entries only occur where the
// displacement is zero.
Vector positive_weights(const Vector& divisor) {
  Vector w(divisor);
  for (double& v : w) {
    if (!(v > 0)) v = 1.0;
  }
  return w;
}

}  // namespace

OptimizerState init_state(OptimizerKind kind, ConstVectorView x0, const FeasibleRegion& region) {
  require_same_length(x0.size(), region.dimension(), "x0");
  if (!region.contains(x0)) throw InvalidArgument("x0 lies outside the feasible region");
  const std::size_t n = x0.size();
  OptimizerState state;
  state.kind = kind;
  state.t = 0;
  state.m.assign(n, 0.0);
  state.s.assign(n, 0.0);
  state.s_hat.assign(n, 0.0);
  state.x.assign(x0.begin(), x0.end());
  return state;
}

StepResult fastadabelief_step(const OptimizerState& state, ConstVectorView g,
                              const HyperParams& hp, const FeasibleRegion& region) {
  const std::uint64_t t = begin_step(state, g, OptimizerKind::fastadabelief);
  const std::size_t n = g.size();
  const double b1 = hp.beta1_t(t);
  const double b2 = hp.beta2_t(t);
  const double a_t = hp.alpha_t(t);
  const double vanishing = hp.delta / static_cast<double>(t);

  OptimizerState next = state;
  next.t = t;
  StepOutcome out;
  out.delta_applied.resize(n);
  out.stepsize_scale.resize(n);
  Vector s_diag(n);
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) {
    next.m[i] = b1 * state.m[i] + (1 - b1) * g[i];
    const double belief = g[i] - next.m[i];
    next.s[i] = b2 * state.s[i] + (1 - b2) * belief * belief;
    next.s_hat[i] = std::max(state.s_hat[i], next.s[i]);
    s_diag[i] = next.s_hat[i] + vanishing;
    if (!(s_diag[i] > 0)) throw NumericError("s_hat + delta/t vanished (delta must be > 0)", t);
    out.stepsize_scale[i] = a_t / s_diag[i];
    out.delta_applied[i] = -out.stepsize_scale[i] * next.m[i];
    z[i] = state.x[i] + out.delta_applied[i];
  }
  out.x_next = project_weighted(z, region, s_diag);
  return finish_step(std::move(next), std::move(out));
}

StepResult adabelief_step(const OptimizerState& state, ConstVectorView g, const HyperParams& hp,
                          const FeasibleRegion& region) {
  const std::uint64_t t = begin_step(state, g, OptimizerKind::adabelief);
  const std::size_t n = g.size();
  const double b1 = hp.beta1_t(t);
  const double b2 = hp.beta2_t(t);
  const double a_t = hp.alpha_t(t);

  OptimizerState next = state;
  next.t = t;
  StepOutcome out;
  out.delta_applied.resize(n);
  out.stepsize_scale.resize(n);
  Vector divisor(n);
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) {
    next.m[i] = b1 * state.m[i] + (1 - b1) * g[i];
    const double belief = g[i] - next.m[i];
    next.s[i] = b2 * state.s[i] + (1 - b2) * belief * belief;
    next.s_hat[i] = std::max(state.s_hat[i], next.s[i]);
    divisor[i] = std::sqrt(next.s_hat[i]) + hp.epsilon;
    out.stepsize_scale[i] = divisor[i] > 0 ? a_t / divisor[i] : 0.0;
    out.delta_applied[i] = -a_t * safe_ratio(next.m[i], divisor[i], t);
    z[i] = state.x[i] + out.delta_applied[i];
  }
  out.x_next = project_weighted(z, region, positive_weights(divisor));
  return finish_step(std::move(next), std::move(out));
}

StepResult sadam_step(const OptimizerState& state, ConstVectorView g, const HyperParams& hp,
                      const FeasibleRegion& region) {
  const std::uint64_t t = begin_step(state, g, OptimizerKind::sadam);
  const std::size_t n = g.size();
  const double b1 = hp.beta1_t(t);
  const double b2 = hp.beta2_t(t);
  const double a_t = hp.alpha_t(t);
  const double vanishing = hp.delta / static_cast<double>(t);

  OptimizerState next = state;
  next.t = t;
  StepOutcome out;
  out.delta_applied.resize(n);
  out.stepsize_scale.resize(n);
  Vector v_diag(n);
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) {
    next.m[i] = b1 * state.m[i] + (1 - b1) * g[i];
    next.s[i] = b2 * state.s[i] + (1 - b2) * g[i] * g[i];
    next.s_hat[i] = std::max(state.s_hat[i], next.s[i]);
    v_diag[i] = next.s[i] + vanishing;
    if (!(v_diag[i] > 0)) throw NumericError("v + delta/t vanished (delta must be > 0)", t);
    out.stepsize_scale[i] = a_t / v_diag[i];
    out.delta_applied[i] = -out.stepsize_scale[i] * next.m[i];
    z[i] = state.x[i] + out.delta_applied[i];
  }
  out.x_next = project_weighted(z, region, v_diag);
  return finish_step(std::move(next), std::move(out));
}

StepResult adam_step(const OptimizerState& state, ConstVectorView g, const HyperParams& hp,
                     const FeasibleRegion& region) {
  const std::uint64_t t = begin_step(state, g, OptimizerKind::adam);
  const std::size_t n = g.size();
  const double b1 = hp.beta1_t(t);
  const double b2 = hp.beta2_t(t);
  const double a_t = hp.alpha_t(t);

  OptimizerState next = state;
  next.t = t;
  StepOutcome out;
  out.delta_applied.resize(n);
  out.stepsize_scale.resize(n);
  Vector divisor(n);
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) {
    next.m[i] = b1 * state.m[i] + (1 - b1) * g[i];
    next.s[i] = b2 * state.s[i] + (1 - b2) * g[i] * g[i];
    next.s_hat[i] = std::max(state.s_hat[i], next.s[i]);
    divisor[i] = std::sqrt(next.s[i]) + hp.epsilon;
    out.stepsize_scale[i] = divisor[i] > 0 ? a_t / divisor[i] : 0.0;
    out.delta_applied[i] = -a_t * safe_ratio(next.m[i], divisor[i], t);
    z[i] = state.x[i] + out.delta_applied[i];
  }
  out.x_next = project_weighted(z, region, positive_weights(divisor));
  return finish_step(std::move(next), std::move(out));
}

StepResult sgd_momentum_step(const OptimizerState& state, ConstVectorView g,
                             const HyperParams& hp, const FeasibleRegion& region) {
  const std::uint64_t t = begin_step(state, g, OptimizerKind::sgd_momentum);
  const std::size_t n = g.size();
  const double b1 = hp.beta1_t(t);
  const double a_t = hp.alpha_t(t);

  OptimizerState next = state;
  next.t = t;
  StepOutcome out;
  out.delta_applied.resize(n);
  out.stepsize_scale.assign(n, a_t);
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) {
    next.m[i] = b1 * state.m[i] + g[i];
    out.delta_applied[i] = -a_t * next.m[i];
    z[i] = state.x[i] + out.delta_applied[i];
  }
  out.x_next = project_weighted(z, region, Vector(n, 1.0));
  return finish_step(std::move(next), std::move(out));
}

StepResult yogi_step(const OptimizerState& state, ConstVectorView g, const HyperParams& hp,
                     const FeasibleRegion& region) {
  const std::uint64_t t = begin_step(state, g, OptimizerKind::yogi);
  const std::size_t n = g.size();
  const double b1 = hp.beta1_t(t);
  const double b2 = hp.beta2_t(t);
  const double a_t = hp.alpha_t(t);

  OptimizerState next = state;
  next.t = t;
  StepOutcome out;
  out.delta_applied.resize(n);
  out.stepsize_scale.resize(n);
  Vector divisor(n);
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) {
    next.m[i] = b1 * state.m[i] + (1 - b1) * g[i];
    const double g2 = g[i] * g[i];
    const double diff = state.s[i] - g2;
    const double sign = diff > 0 ? 1.0 : (diff < 0 ? -1.0 : 0.0);
    next.s[i] = state.s[i] - (1 - b2) * sign * g2;
    next.s_hat[i] = std::max(state.s_hat[i], next.s[i]);
    divisor[i] = std::sqrt(next.s[i]) + hp.epsilon;
    out.stepsize_scale[i] = divisor[i] > 0 ? a_t / divisor[i] : 0.0;
    out.delta_applied[i] = -a_t * safe_ratio(next.m[i], divisor[i], t);
    z[i] = state.x[i] + out.delta_applied[i];
  }
  out.x_next = project_weighted(z, region, positive_weights(divisor));
  return finish_step(std::move(next), std::move(out));
}

StepResult adabound_step(const OptimizerState& state, ConstVectorView g, const HyperParams& hp,
                         const FeasibleRegion& region) {
  const std::uint64_t t = begin_step(state, g, OptimizerKind::adabound);
  const std::size_t n = g.size();
  const double b1 = hp.beta1_t(t);
  const double b2 = hp.beta2_t(t);
  const double a_t = hp.alpha_t(t);
  const double gt = hp.adabound.gamma * static_cast<double>(t);
  // 1 - 1/(gt + 1) written as gt/(gt + 1) to avoid cancellation at small t
  const double lower = hp.adabound.final_rate * (gt / (gt + 1.0));
  const double upper = hp.adabound.final_rate * (1.0 + 1.0 / gt);

  OptimizerState next = state;
  next.t = t;
  StepOutcome out;
  out.delta_applied.resize(n);
  out.stepsize_scale.resize(n);
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) {
    next.m[i] = b1 * state.m[i] + (1 - b1) * g[i];
    next.s[i] = b2 * state.s[i] + (1 - b2) * g[i] * g[i];
    next.s_hat[i] = std::max(state.s_hat[i], next.s[i]);
    const double divisor = std::sqrt(next.s[i]) + hp.epsilon;
    // a zero divisor means an unbounded raw rate, which the upper clip absorbs
    const double raw = divisor > 0 ? a_t / divisor : upper;
    out.stepsize_scale[i] = std::clamp(raw, lower, upper);
    out.delta_applied[i] = -out.stepsize_scale[i] * next.m[i];
    z[i] = state.x[i] + out.delta_applied[i];
  }
  out.x_next = project_weighted(z, region, out.stepsize_scale);
  return finish_step(std::move(next), std::move(out));
}

StepResult step(const OptimizerState& state, ConstVectorView g, const HyperParams& hp,
                const FeasibleRegion& region) {
  switch (state.kind) {
    case OptimizerKind::sgd_momentum:
      return sgd_momentum_step(state, g, hp, region);
    case OptimizerKind::adam:
      return adam_step(state, g, hp, region);
    case OptimizerKind::yogi:
      return yogi_step(state, g, hp, region);
    case OptimizerKind::adabound:
      return adabound_step(state, g, hp, region);
    case OptimizerKind::adabelief:
      return adabelief_step(state, g, hp, region);
    case OptimizerKind::sadam:
      return sadam_step(state, g, hp, region);
    case OptimizerKind::fastadabelief:
      return fastadabelief_step(state, g, hp, region);
  }
  throw InvalidArgument("unknown optimizer kind");
}

}  // namespace fastbelief::optim
