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

#include "fastbelief/lab/conditions.hpp"

#include <cmath>
#include <limits>

namespace fastbelief::lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBandSlack = 1e-12;

void require_full(const TrajectoryTrace& trace, const char* what) {
  if (trace.steps.empty()) throw InvalidArgument(std::string(what) + ": empty trace");
  if (!trace.has_full_series()) {
    throw InvalidArgument(std::string(what) +
                          ": trace is thinned; re-run with stride 1 to get every round");
  }
}

double multiplier(std::uint64_t t, ConditionVariant v) {
  const auto td = static_cast<double>(t);
  return v == ConditionVariant::strongly_convex ? td : std::sqrt(td);
}

}  // namespace

Condition4Report check_condition4(const TrajectoryTrace& trace, double sigma,
                                  ConditionVariant variant) {
  require_full(trace, "check_condition4");
  if (!(sigma >= 0)) throw InvalidArgument("check_condition4: sigma must be nonnegative");
  const double a = trace.hp.alpha;
  Condition4Report rep;
  rep.upper = variant == ConditionVariant::strongly_convex ? sigma * (1.0 - trace.hp.beta1) : kInf;
  const std::size_t n = trace.dense.front().s.size();
  const Vector zero(n, 0.0);
  for (const auto& rec : trace.dense) {
    const Vector& prev = rec.t == 1 ? zero : trace.dense[rec.t - 2].s;
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = (multiplier(rec.t, variant) / a) * std::sqrt(rec.s[i]) -
                       (multiplier(rec.t - 1, variant) / a) * std::sqrt(prev[i]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    rep.lhs_min.push_back(lo);
    rep.lhs_max.push_back(hi);
    if ((lo < 0 || hi > rep.upper + kBandSlack) && rep.pass) {
      rep.pass = false;
      rep.first_failure = rec.t;
    }
  }
  return rep;
}

Condition3Report check_condition3(const TrajectoryTrace& trace, ConditionVariant variant) {
  require_full(trace, "check_condition3");
  const double a = trace.hp.alpha;
  const std::size_t n = trace.dense.front().g.size();
  Vector w(n, 0.0), g2(n, 0.0);
  Condition3Report rep;
  for (const auto& rec : trace.dense) {
    const double b2 = trace.hp.beta2_t(rec.t);
    double zeta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double gi2 = rec.g[i] * rec.g[i];
      w[i] = b2 * w[i] + (1 - b2) * gi2;
      g2[i] += gi2;
      if (g2[i] == 0.0) continue;
      const double lhs = (multiplier(rec.t, variant) / a) * std::sqrt(w[i]);
      zeta = lhs > 0 ? std::max(zeta, std::sqrt(g2[i]) / lhs) : kInf;
    }
    rep.zeta.push_back(zeta);
    rep.zeta_max = std::max(rep.zeta_max, zeta);
  }
  return rep;
}

GammaReport check_gamma_psd(const TrajectoryTrace& trace) {
  require_full(trace, "check_gamma_psd");
  const auto& hp = trace.hp;
  GammaReport rep;
  rep.min = kInf;
  for (const auto& rec : trace.dense) {
    const double a_t = hp.alpha_t(rec.t);
    double lo = kInf;
    for (std::size_t i = 0; i < rec.s_hat.size(); ++i) {
      const double prev = rec.t == 1 ? 0.0 : trace.dense[rec.t - 2].s_hat[i] / hp.alpha_t(rec.t - 1);
      lo = std::min(lo, rec.s_hat[i] / a_t - prev);
    }
    rep.per_step.push_back(lo);
    if (lo < rep.min) {
      rep.min = lo;
      rep.argmin = rec.t;
    }
  }
  return rep;
}

}  // namespace fastbelief::lab
