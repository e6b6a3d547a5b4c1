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

#include "fastbelief/common.hpp"

namespace fastbelief::optim {

/// Axis-aligned box lo <= x <= hi. Immutable once built.
class FeasibleRegion {
 public:
  FeasibleRegion(Vector lo, Vector hi);

  /// The cube [lo, hi]^n.
  static FeasibleRegion box(std::size_t n, double lo, double hi);

  std::size_t dimension() const noexcept { return lo_.size(); }
  const Vector& lo() const noexcept { return lo_; }
  const Vector& hi() const noexcept { return hi_; }

  /// l-infinity diameter max_i (hi_i - lo_i).
  double diameter_inf() const noexcept { return diameter_; }

  bool contains(ConstVectorView x) const;
  Vector clip(ConstVectorView z) const;

 private:
  Vector lo_;
  Vector hi_;
  double diameter_ = 0.0;
};

/// argmin over the box of sum_i w_i (y_i - z_i)^2. With a diagonal weight and a
/// box this separates per coordinate, so the answer is plain clipping and does
/// not depend on w. Throws on a nonpositive weight or length mismatch.
Vector project_weighted(ConstVectorView z, const FeasibleRegion& region, ConstVectorView w);

}  // namespace fastbelief::optim
