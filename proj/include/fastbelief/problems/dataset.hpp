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

#include <filesystem>

#include "fastbelief/common.hpp"

namespace fastbelief::problems {

/// Labelled feature matrix, stored row-major. Immutable once built.
class Dataset {
 public:
  Dataset(Vector features, std::vector<std::size_t> labels, std::size_t dim,
          std::size_t classes);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t classes() const noexcept { return classes_; }

  ConstVectorView feature(std::size_t i) const {
    return ConstVectorView(features_).subspan(i * dim_, dim_);
  }
  std::size_t label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  const Vector& features() const noexcept { return features_; }

  bool operator==(const Dataset&) const = default;

 private:
  Vector features_;
  std::vector<std::size_t> labels_;
  std::size_t dim_;
  std::size_t classes_;
};

struct MiniBatch {
  std::vector<std::size_t> indices;
  std::uint64_t round = 0;
};

enum class SamplingMode {
  with_replacement,  ///< m i.i.d. uniform draws per round
  full_batch,        ///< every sample once per round; requires m == size
};

/// Deterministic batch for round t: a pure function of (dataset size, m, t, seed).
MiniBatch sample_batch(const Dataset& data, std::size_t m, std::uint64_t t, std::uint64_t seed,
                       SamplingMode mode = SamplingMode::with_replacement);

/// Gaussian blobs with unit covariance, one per class, labels assigned
/// round-robin. For classes <= dim the means are separation/sqrt(2) * e_k, so
/// every pair of means sits exactly `separation` apart; otherwise the means are
/// random directions of the same norm.
Dataset synth_classification(std::uint64_t seed, std::size_t classes, std::size_t dim,
                             std::size_t samples, double separation);

/**
 * Reads `label,f1,...,fd` rows. A first row whose leading field is not a
 * number is treated as a header. Labels are renumbered 0..K-1 in order of
 * first appearance. Accepts `\n` and `\r\n` line endings; blank lines are
 * skipped. Errors are ParseError with the offending line number.
 */
Dataset load_csv(const std::filesystem::path& path);

}  // namespace fastbelief::problems
