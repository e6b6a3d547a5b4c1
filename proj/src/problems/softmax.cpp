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

#include "fastbelief/problems/softmax.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fastbelief::problems {

namespace {

void check_params(ConstVectorView params, const Dataset& data) {
  require_same_length(params.size(), softmax_param_count(data), "softmax parameters");
}

// Adds one sample's cross-entropy (scaled by `weight`) and its gradient.
// `logits` is scratch space of length K.
double accumulate_sample(ConstVectorView params, const Dataset& data, std::size_t i,
                         double weight, Vector& logits, std::span<double> grad) {
  const std::size_t d = data.dim();
  const std::size_t k_count = data.classes();
  const auto x = data.feature(i);
  const std::size_t bias_offset = k_count * d;
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < k_count; ++k) {
    double z = params[bias_offset + k];
    const double* w = params.data() + k * d;
    for (std::size_t j = 0; j < d; ++j) z += w[j] * x[j];
    logits[k] = z;
    peak = std::max(peak, z);
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) sum += std::exp(logits[k] - peak);
  const double log_norm = peak + std::log(sum);
  const std::size_t y = data.label(i);
  const double loss = log_norm - logits[y];
  if (!grad.empty()) {
    for (std::size_t k = 0; k < k_count; ++k) {
      double coeff = std::exp(logits[k] - log_norm);
      if (k == y) coeff -= 1.0;
      coeff *= weight;
      if (coeff == 0.0) continue;
      double* gw = grad.data() + k * d;
      for (std::size_t j = 0; j < d; ++j) gw[j] += coeff * x[j];
      grad[bias_offset + k] += coeff;
    }
  }
  return weight * loss;
}

double add_regularizer(ConstVectorView params, const Dataset& data, double sigma1, double sigma2,
                       std::span<double> grad) {
  const std::size_t bias_offset = data.classes() * data.dim();
  double reg = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    const double sigma = p < bias_offset ? sigma1 : sigma2;
    reg += sigma * params[p] * params[p];
    if (!grad.empty()) grad[p] += 2.0 * sigma * params[p];
  }
  return reg;
}

}  // namespace

double softmax_l2_weighted(ConstVectorView params, const Dataset& data,
                           std::span<const double> counts, double normalizer, double sigma1,
                           double sigma2, std::span<double> grad) {
  check_params(params, data);
  require_same_length(counts.size(), data.size(), "sample weights");
  if (!grad.empty()) {
    require_same_length(grad.size(), params.size(), "softmax gradient");
    std::fill(grad.begin(), grad.end(), 0.0);
  }
  if (!(normalizer > 0)) throw InvalidArgument("softmax normalizer must be positive");
  Vector logits(data.classes());
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (counts[i] == 0.0) continue;
    total += accumulate_sample(params, data, i, counts[i] / normalizer, logits, grad);
  }
  return total + add_regularizer(params, data, sigma1, sigma2, grad);
}

double softmax_l2_loss(ConstVectorView params, const MiniBatch& batch, const Dataset& data,
                       double sigma1, double sigma2) {
  check_params(params, data);
  if (batch.indices.empty()) throw InvalidArgument("softmax loss on an empty batch");
  const double weight = 1.0 / static_cast<double>(batch.indices.size());
  Vector logits(data.classes());
  double total = 0.0;
  for (std::size_t i : batch.indices) {
    if (i >= data.size()) throw InvalidArgument(fmt::format("batch index {} out of range", i));
    total += accumulate_sample(params, data, i, weight, logits, {});
  }
  return total + add_regularizer(params, data, sigma1, sigma2, {});
}

Vector softmax_l2_grad(ConstVectorView params, const MiniBatch& batch, const Dataset& data,
                       double sigma1, double sigma2) {
  check_params(params, data);
  if (batch.indices.empty()) throw InvalidArgument("softmax gradient on an empty batch");
  const double weight = 1.0 / static_cast<double>(batch.indices.size());
  Vector grad(params.size(), 0.0);
  Vector logits(data.classes());
  for (std::size_t i : batch.indices) {
    if (i >= data.size()) throw InvalidArgument(fmt::format("batch index {} out of range", i));
    accumulate_sample(params, data, i, weight, logits, grad);
  }
  add_regularizer(params, data, sigma1, sigma2, grad);
  return grad;
}

}  // namespace fastbelief::problems
