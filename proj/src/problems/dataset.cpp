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

#include "fastbelief/problems/dataset.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "fastbelief/random.hpp"

namespace fastbelief::problems {

Dataset::Dataset(Vector features, std::vector<std::size_t> labels, std::size_t dim,
                 std::size_t classes)
    : features_(std::move(features)), labels_(std::move(labels)), dim_(dim), classes_(classes) {
  if (labels_.empty()) throw InvalidArgument("dataset needs at least one sample");
  if (dim_ == 0) throw InvalidArgument("dataset feature dimension must be positive");
  if (classes_ == 0) throw InvalidArgument("dataset needs at least one class");
  require_same_length(features_.size(), labels_.size() * dim_, "dataset features");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= classes_) {
      throw InvalidArgument(fmt::format("label {} of sample {} is not below K={}", labels_[i], i,
                                        classes_));
    }
  }
  if (!all_finite(features_)) throw InvalidArgument("dataset features must be finite");
}

MiniBatch sample_batch(const Dataset& data, std::size_t m, std::uint64_t t, std::uint64_t seed,
                       SamplingMode mode) {
  const std::size_t n = data.size();
  if (m < 1 || m > n) {
    throw InvalidArgument(fmt::format("batch size {} outside [1, {}]", m, n));
  }
  MiniBatch batch;
  batch.round = t;
  batch.indices.resize(m);
  if (mode == SamplingMode::full_batch) {
    if (m != n) throw InvalidArgument("full-batch sampling requires m == number of samples");
    for (std::size_t i = 0; i < n; ++i) batch.indices[i] = i;
    return batch;
  }
  Engine engine(derive_seed(seed, kBatchStream, t));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (auto& index : batch.indices) index = pick(engine);
  return batch;
}

Dataset synth_classification(std::uint64_t seed, std::size_t classes, std::size_t dim,
                             std::size_t samples, double separation) {
  if (classes < 2) throw InvalidArgument("synth_classification needs at least 2 classes");
  if (dim < 1) throw InvalidArgument("synth_classification needs dim >= 1");
  if (samples < classes) throw InvalidArgument("synth_classification needs samples >= classes");
  if (!(separation >= 0) || !std::isfinite(separation)) {
    throw InvalidArgument("class separation must be finite and nonnegative");
  }
  Engine engine(derive_seed(seed, kDataStream, 0));
  std::normal_distribution<double> normal(0.0, 1.0);

  const double radius = separation / std::sqrt(2.0);
  Vector means(classes * dim, 0.0);
  if (classes <= dim) {
    for (std::size_t k = 0; k < classes; ++k) means[k * dim + k] = radius;
  } else {
    for (std::size_t k = 0; k < classes; ++k) {
      double norm2 = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        means[k * dim + j] = normal(engine);
        norm2 += means[k * dim + j] * means[k * dim + j];
      }
      const double scale = norm2 > 0 ? radius / std::sqrt(norm2) : 0.0;
      for (std::size_t j = 0; j < dim; ++j) means[k * dim + j] *= scale;
    }
  }

  Vector features(samples * dim);
  std::vector<std::size_t> labels(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    labels[i] = i % classes;
    for (std::size_t j = 0; j < dim; ++j) {
      features[i * dim + j] = means[labels[i] * dim + j] + normal(engine);
    }
  }
  return Dataset(std::move(features), std::move(labels), dim, classes);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_number(std::string_view token, double& out) {
  token = trim(token);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument(fmt::format("cannot read dataset '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  Vector features;
  std::vector<std::size_t> labels;
  std::map<double, std::size_t> label_ids;
  std::size_t dim = 0;
  bool first_row = true;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto newline = text.find('\n', pos);
    if (newline == std::string::npos) newline = text.size();
    const std::string_view line = trim(std::string_view(text).substr(pos, newline - pos));
    pos = newline + 1;
    ++line_no;
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    double label_value = 0.0;
    const bool numeric_label = parse_number(fields[0], label_value);
    if (first_row) {
      first_row = false;
      if (!numeric_label) continue;  // header
    }
    if (!numeric_label) throw ParseError(fmt::format("label '{}' is not numeric", fields[0]), line_no);
    if (fields.size() < 2) throw ParseError("row has no feature columns", line_no);
    if (dim == 0) {
      dim = fields.size() - 1;
    } else if (fields.size() - 1 != dim) {
      throw ParseError(fmt::format("ragged row: {} features, expected {}", fields.size() - 1, dim),
                       line_no);
    }
    for (std::size_t j = 1; j < fields.size(); ++j) {
      double value = 0.0;
      if (!parse_number(fields[j], value)) {
        throw ParseError(fmt::format("feature {} ('{}') is not numeric", j, trim(fields[j])),
                         line_no);
      }
      features.push_back(value);
    }
    const auto [it, inserted] = label_ids.emplace(label_value, label_ids.size());
    labels.push_back(it->second);
  }
  if (labels.empty()) {
    throw ParseError(fmt::format("'{}' contains no data rows", path.string()), line_no);
  }
  const std::size_t classes = label_ids.size();
  return Dataset(std::move(features), std::move(labels), dim, classes);
}

}  // namespace fastbelief::problems
