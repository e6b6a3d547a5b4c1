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

#include "fastbelief/optim/stepsize_probe.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fastbelief::optim {

Vector stepsize_probe(OptimizerKind kind, ConstVectorView m, ConstVectorView s, std::uint64_t t,
                      const HyperParams& hp) {
  require_same_length(m.size(), s.size(), "stepsize_probe");
  if (t < 1) throw InvalidArgument("stepsize_probe needs t >= 1");
  for (double v : s) {
    if (!(v >= 0)) throw InvalidArgument("stepsize_probe needs s >= 0");
  }
  const double a_t = hp.alpha_t(t);
  const double vanishing = hp.delta / static_cast<double>(t);
  Vector delta(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    switch (kind) {
      case OptimizerKind::sgd_momentum:
        delta[i] = -a_t * m[i];
        break;
      case OptimizerKind::adam:
      case OptimizerKind::adabelief:
        delta[i] = -a_t * m[i] / (std::sqrt(s[i]) + hp.epsilon);
        break;
      case OptimizerKind::sadam:
      case OptimizerKind::fastadabelief:
        delta[i] = -a_t * m[i] / std::sqrt(s[i] + vanishing);
        break;
      default:
        throw InvalidArgument(
            fmt::format("no stepsize probe formula for optimizer '{}'", to_string(kind)));
    }
  }
  return delta;
}

}  // namespace fastbelief::optim
