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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "fastbelief/common.hpp"
#include "fastbelief/problems/dataset.hpp"
#include "fastbelief/problems/quadratic.hpp"

namespace fastbelief::problems {

enum class ProblemKind { softmax_l2, quadratic };

class ProblemInstance;

std::string to_string(ProblemKind kind);

struct SoftmaxProblem {
  std::shared_ptr<const Dataset> data;
  double sigma1 = 0.01;
  double sigma2 = 0.01;
  std::size_t batch_size = 32;
  SamplingMode mode = SamplingMode::with_replacement;
};

/// Round t sees b_t = b + noise * xi_t with xi_t ~ N(0, I) keyed by (seed, t).
/// noise = 0 gives the same loss every round.
struct QuadraticProblem {
  Quadratic q;
  double noise = 0.0;
};

/// The loss revealed at one round of the online game. Refers back to the
/// instance that produced it, which must outlive it.
class OnlineLoss {
 public:
  double value(ConstVectorView x) const;
  Vector gradient(ConstVectorView x) const;

 private:
  friend class ProblemInstance;
  const ProblemInstance* owner_ = nullptr;
  MiniBatch batch_;
  Eigen::VectorXd linear_;  // quadratic only: b_t
};

/**
 * Average of the first `rounds` losses, (1/T') sum_t f_t. Sums and averages
 * differ only by the factor `rounds`, so minimizers coincide.
 */
class PrefixObjective {
 public:
  std::size_t rounds() const noexcept { return rounds_; }
  double value(ConstVectorView x) const;
  /// Average value; writes the average gradient into `grad`.
  double value_and_gradient(ConstVectorView x, std::span<double> grad) const;
  /// Upper estimate of the gradient Lipschitz constant of the average.
  double lipschitz() const noexcept { return lipschitz_; }

 private:
  friend class ProblemInstance;
  const ProblemInstance* owner_ = nullptr;
  std::size_t rounds_ = 0;
  Vector counts_;              // softmax: draws of each sample
  Eigen::VectorXd linear_;     // quadratic: mean b_t
  double lipschitz_ = 0.0;
};

class ProblemInstance {
 public:
  static ProblemInstance softmax_l2(SoftmaxProblem p);
  /// `sigma` overrides the computed smallest eigenvalue; it must not exceed it.
  static ProblemInstance quadratic(QuadraticProblem p, std::optional<double> sigma = std::nullopt);

  ProblemKind kind() const noexcept;
  std::size_t dimension() const noexcept;
  double sigma() const noexcept { return sigma_; }

  const SoftmaxProblem& softmax() const;
  const QuadraticProblem& quadratic_problem() const;

  OnlineLoss round(std::uint64_t t, std::uint64_t seed) const;
  PrefixObjective prefix(std::size_t rounds, std::uint64_t seed) const;

  /// Noise-free full objective: full-data softmax or the base quadratic.
  double objective(ConstVectorView x) const;
  Vector objective_gradient(ConstVectorView x) const;

 private:
  friend class OnlineLoss;
  friend class PrefixObjective;
  std::variant<SoftmaxProblem, QuadraticProblem> spec_;
  double sigma_ = 0.0;
  double quadratic_lmax_ = 0.0;
};

using ScalarOracle = std::function<double(ConstVectorView)>;

/// Central differences (f(x + h e_i) - f(x - h e_i)) / (2h).
Vector finite_diff_grad(const ScalarOracle& f, ConstVectorView x, double h);

}  // namespace fastbelief::problems
