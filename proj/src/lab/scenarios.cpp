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

#include "fastbelief/lab/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "fastbelief/optim/stepsize_probe.hpp"

namespace fastbelief::lab {

std::vector<RegionScenario> region_scenarios(std::size_t length, double scale) {
  if (length < 1) throw InvalidArgument("scenario length must be >= 1");
  if (!(scale > 0) || !std::isfinite(scale)) throw InvalidArgument("scenario scale must be > 0");
  std::vector<RegionScenario> out(3);
  out[0] = {1, "small_g_small_change", Vector(length, 1e-3 * scale)};
  out[1] = {2, "large_g_large_change", Vector(length)};
  for (std::size_t k = 0; k < length; ++k) out[1].gradients[k] = k % 2 == 0 ? scale : -scale;
  out[2] = {3, "large_g_small_change", Vector(length, scale)};
  return out;
}

FrozenMoments freeze_moments(const Vector& gradients, std::uint64_t t, double beta1,
                             double beta2) {
  if (t < 1 || t > gradients.size()) throw InvalidArgument("freeze_moments: t out of range");
  FrozenMoments f;
  for (std::uint64_t k = 0; k < t; ++k) {
    const double g = gradients[k];
    f.m = beta1 * f.m + (1 - beta1) * g;
    f.v = beta2 * f.v + (1 - beta2) * g * g;
    f.s = beta2 * f.s + (1 - beta2) * (g - f.m) * (g - f.m);
  }
  return f;
}

std::vector<ProbeRow> probe_table(const ProbeSettings& settings) {
  if (settings.steps.empty()) throw InvalidArgument("probe_table needs at least one step");
  const std::uint64_t longest = *std::max_element(settings.steps.begin(), settings.steps.end());
  std::vector<ProbeRow> rows;
  for (const auto& sc : region_scenarios(longest, settings.scale)) {
    for (std::uint64_t t : settings.steps) {
      const auto fm = freeze_moments(sc.gradients, t);
      for (auto kind : kProbeOptimizers) {
        auto hp = optim::HyperParams::defaults_for(kind, settings.alpha);
        if (optim::uses_vanishing_factor(kind)) hp.delta = settings.delta;
        const bool belief =
            kind == optim::OptimizerKind::adabelief || kind == optim::OptimizerKind::fastadabelief;
        const double second = belief ? fm.s : fm.v;
        const auto d = optim::stepsize_probe(kind, Vector{fm.m}, Vector{second}, t, hp);
        rows.push_back({sc.region, sc.name, t, kind, fm.m, second, std::abs(d[0])});
      }
    }
  }
  return rows;
}

}  // namespace fastbelief::lab
