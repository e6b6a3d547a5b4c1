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

#include "fastbelief/optim/region.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fastbelief::optim {

FeasibleRegion::FeasibleRegion(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  require_same_length(lo_.size(), hi_.size(), "region bounds");
  if (lo_.empty()) throw InvalidArgument("region must have at least one coordinate");
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i])) {
      throw InvalidArgument(fmt::format("region bound {} is not finite", i));
    }
    if (lo_[i] > hi_[i]) {
      throw InvalidArgument(fmt::format("region coordinate {}: lo {} > hi {}", i, lo_[i], hi_[i]));
    }
    diameter_ = std::max(diameter_, hi_[i] - lo_[i]);
  }
  if (!(diameter_ > 0)) throw InvalidArgument("region has zero diameter");
}

FeasibleRegion FeasibleRegion::box(std::size_t n, double lo, double hi) {
  return FeasibleRegion(Vector(n, lo), Vector(n, hi));
}

bool FeasibleRegion::contains(ConstVectorView x) const {
  if (x.size() != lo_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo_[i] && x[i] <= hi_[i])) return false;
  }
  return true;
}

Vector FeasibleRegion::clip(ConstVectorView z) const {
  require_same_length(z.size(), lo_.size(), "clip");
  Vector y(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) y[i] = std::min(hi_[i], std::max(lo_[i], z[i]));
  return y;
}

Vector project_weighted(ConstVectorView z, const FeasibleRegion& region, ConstVectorView w) {
  require_same_length(z.size(), region.dimension(), "project_weighted point");
  require_same_length(w.size(), region.dimension(), "project_weighted weights");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0)) {
      throw InvalidArgument(fmt::format("projection weight {} is not positive ({})", i, w[i]));
    }
  }
  return region.clip(z);
}

}  // namespace fastbelief::optim
