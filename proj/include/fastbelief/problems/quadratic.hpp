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

#include <Eigen/Dense>

#include "fastbelief/common.hpp"

namespace fastbelief::problems {

/// f(x) = 1/2 x^T A x + b^T x with A symmetric.
class Quadratic {
 public:
  /// Throws InvalidArgument when |A_ij - A_ji| > 1e-12 for some pair.
  Quadratic(Eigen::MatrixXd a, Eigen::VectorXd b);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(b_.size()); }
  const Eigen::MatrixXd& a() const noexcept { return a_; }
  const Eigen::VectorXd& b() const noexcept { return b_; }

  double smallest_eigenvalue() const;
  /// -A^{-1} b; requires A positive definite.
  Vector minimizer() const;

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
};

double quadratic_loss(ConstVectorView x, const Quadratic& q);
Vector quadratic_grad(ConstVectorView x, const Quadratic& q);

/// A = Q diag(linspace(eig_min, eig_max, n)) Q^T with a seeded random
/// rotation Q, and b = -A x_pop where x_pop ~ U[-minimizer_scale, minimizer_scale]^n.
Quadratic make_spectral_quadratic(std::uint64_t seed, std::size_t n, double eig_min,
                                  double eig_max, double minimizer_scale);

/// Power iteration on a symmetric PSD matrix; converges to relative change
/// below `tol`. Returns the Rayleigh quotient.
double largest_eigenvalue(const Eigen::MatrixXd& m, double tol = 1e-12,
                          std::size_t max_iterations = 100000);

}  // namespace fastbelief::problems
