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

#include "fastbelief/lab/trace.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fastbelief/optim/optimizer.hpp"

namespace fastbelief::lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Online accumulators for the per-step diagnostics.
struct Diagnostics {
  explicit Diagnostics(std::size_t n) : w(n, 0.0), g2(n, 0.0), g4(n, 0.0) {}

  Vector w;   // beta2-weighted sum of g^2
  Vector g2;  // plain sum of g^2
  Vector g4;  // sum of g^4
  double g_inf = 0.0;
  double r = 0.0;
};

}  // namespace

bool TrajectoryTrace::has_full_series() const noexcept {
  if (dense.size() != steps.size()) return false;
  for (std::size_t k = 0; k < dense.size(); ++k) {
    if (dense[k].t != k + 1) return false;
  }
  return true;
}

std::size_t default_stride(std::uint64_t rounds) { return rounds <= 10000 ? 1 : 10; }

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t rounds, std::uint64_t first) {
  if (first < 1) throw InvalidArgument("first checkpoint must be >= 1");
  std::vector<std::uint64_t> out;
  std::uint64_t c = 1;
  while (c < first) c *= 2;
  for (; c <= rounds; c *= 2) out.push_back(c);
  if (!out.empty() && out.back() != rounds) out.push_back(rounds);
  return out;
}

TrajectoryTrace run_online(const problems::ProblemInstance& problem, optim::OptimizerKind kind,
                           const optim::HyperParams& hp, const optim::FeasibleRegion& region,
                           std::uint64_t rounds, std::uint64_t seed, const RunOptions& options) {
  if (rounds < 1) throw InvalidArgument("run needs T >= 1");
  hp.validate_for(kind);
  const std::size_t n = problem.dimension();
  require_same_length(region.dimension(), n, "region");

  TrajectoryTrace trace;
  trace.kind = kind;
  trace.hp = hp;
  trace.seed = seed;
  trace.stride = options.stride.value_or(default_stride(rounds));
  if (trace.stride < 1) throw InvalidArgument("trace stride must be >= 1");
  trace.x0 = options.x0 ? *options.x0 : region.clip(Vector(n, 0.0));
  trace.steps.reserve(rounds);

  auto state = optim::init_state(kind, trace.x0, region);
  Diagnostics diag(n);
  const double a = hp.alpha;
  double cum = 0.0;

  for (std::uint64_t t = 1; t <= rounds; ++t) {
    const auto loss = problem.round(t, seed);
    const double f = loss.value(state.x);
    const Vector g = loss.gradient(state.x);
    if (!std::isfinite(f)) throw NumericError("loss is not finite", t);
    if (!all_finite(g)) throw NumericError("gradient is not finite", t);

    auto result = optim::step(state, g, hp, region);
    const auto& next = result.state;

    StepRecord rec;
    rec.t = t;
    rec.loss = f;
    cum += f;
    rec.cum_loss = cum;
    rec.grad_inf = inf_norm(g);
    rec.step_inf = inf_norm(result.outcome.delta_applied);
    rec.alpha_t = hp.alpha_t(t);
    rec.beta1_t = hp.beta1_t(t);
    rec.beta2_t = hp.beta2_t(t);

    const auto td = static_cast<double>(t);
    const double prev_alpha = t > 1 ? hp.alpha_t(t - 1) : kInf;
    const double b2 = rec.beta2_t;
    const double vanishing = hp.delta / td;
    rec.cond4_min = kInf;
    rec.cond4_max = -kInf;
    rec.gamma_min = kInf;
    double zeta = 0.0;
    double sum_norms = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c4 = (td / a) * std::sqrt(next.s[i]) - ((td - 1) / a) * std::sqrt(state.s[i]);
      rec.cond4_min = std::min(rec.cond4_min, c4);
      rec.cond4_max = std::max(rec.cond4_max, c4);
      const double prev_term = t > 1 ? state.s_hat[i] / prev_alpha : 0.0;
      rec.gamma_min = std::min(rec.gamma_min, next.s_hat[i] / rec.alpha_t - prev_term);

      const double gi2 = g[i] * g[i];
      diag.w[i] = b2 * diag.w[i] + (1 - b2) * gi2;
      diag.g2[i] += gi2;
      diag.g4[i] += gi2 * gi2;
      sum_norms += std::sqrt(diag.g4[i]);
      if (diag.g2[i] > 0) {
        const double lhs = (td / a) * std::sqrt(diag.w[i]);
        zeta = lhs > 0 ? std::max(zeta, std::sqrt(diag.g2[i]) / lhs) : kInf;
      }
      const double denom = next.s_hat[i] + vanishing;
      diag.r = std::max(diag.r, denom > 0 ? 1.0 / std::sqrt(denom) : kInf);
    }
    diag.g_inf = std::max(diag.g_inf, rec.grad_inf);
    rec.cond3_zeta = zeta;
    rec.g_inf_running = diag.g_inf;
    rec.sum_g_norms_running = sum_norms;
    rec.r_running = diag.r;
    trace.steps.push_back(rec);

    const bool keep = options.keep_dense &&
                      (t == 1 || t == rounds || t % trace.stride == 0 ||
                       (t >= 128 && is_power_of_two(t)));
    if (keep) {
      trace.dense.push_back(DenseRecord{t, state.x, g, next.m, next.s, next.s_hat});
    }
    state = std::move(result.state);
  }
  trace.x_final = state.x;
  return trace;
}

}  // namespace fastbelief::lab
