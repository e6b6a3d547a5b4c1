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
#include "fastbelief/problems/dataset.hpp"

namespace fastbelief::problems {

// Parameter packing: w_1..w_K (each of length d, row-major) followed by
// b_1..b_K, so the vector has K (d + 1) entries.

inline std::size_t softmax_param_count(const Dataset& data) {
  return data.classes() * (data.dim() + 1);
}

/// -(1/m) sum_i log softmax(W x_i + b)[y_i] + sigma1 sum_k |w_k|^2 + sigma2 sum_k b_k^2
double softmax_l2_loss(ConstVectorView params, const MiniBatch& batch, const Dataset& data,
                       double sigma1, double sigma2);

Vector softmax_l2_grad(ConstVectorView params, const MiniBatch& batch, const Dataset& data,
                       double sigma1, double sigma2);

/**
 * Weighted form used for aggregated objectives: the cross-entropy of sample i
 * enters with weight counts[i] / normalizer. Writes the gradient into `grad`
 * when it is non-empty. Returns the objective value.
 */
double softmax_l2_weighted(ConstVectorView params, const Dataset& data,
                           std::span<const double> counts, double normalizer, double sigma1,
                           double sigma2, std::span<double> grad);

}  // namespace fastbelief::problems
