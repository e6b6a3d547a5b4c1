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

#include "fastbelief/problems/quadratic.hpp"

#include <fmt/format.h>

#include <cmath>

#include "fastbelief/random.hpp"

namespace fastbelief::problems {

Quadratic::Quadratic(Eigen::MatrixXd a, Eigen::VectorXd b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != a_.cols()) throw DimensionError("quadratic matrix must be square");
  require_same_length(static_cast<std::size_t>(a_.rows()), static_cast<std::size_t>(b_.size()),
                      "quadratic b");
  if (b_.size() == 0) throw InvalidArgument("quadratic needs n >= 1");
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a_.cols(); ++j) {
      if (std::abs(a_(i, j) - a_(j, i)) > 1e-12) {
        throw InvalidArgument(fmt::format("quadratic matrix is not symmetric at ({}, {})", i, j));
      }
    }
  }
  if (!a_.allFinite() || !b_.allFinite()) throw InvalidArgument("quadratic entries must be finite");
}

double Quadratic::smallest_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Vector Quadratic::minimizer() const {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a_);
  const Eigen::VectorXd x = ldlt.solve(-b_);
  return Vector(x.data(), x.data() + x.size());
}

double quadratic_loss(ConstVectorView x, const Quadratic& q) {
  require_same_length(x.size(), q.dimension(), "quadratic point");
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  return 0.5 * xv.dot(q.a() * xv) + q.b().dot(xv);
}

Vector quadratic_grad(ConstVectorView x, const Quadratic& q) {
  require_same_length(x.size(), q.dimension(), "quadratic point");
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd g = q.a() * xv + q.b();
  return Vector(g.data(), g.data() + g.size());
}

Quadratic make_spectral_quadratic(std::uint64_t seed, std::size_t n, double eig_min,
                                  double eig_max, double minimizer_scale) {
  if (n == 0) throw InvalidArgument("quadratic dimension must be positive");
  if (!(eig_min > 0) || !(eig_max >= eig_min)) {
    throw InvalidArgument("need 0 < eig_min <= eig_max");
  }
  Engine engine(derive_seed(seed, kDataStream, 1));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-minimizer_scale, minimizer_scale);
  const auto dim = static_cast<Eigen::Index>(n);

  Eigen::MatrixXd gauss(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) gauss(i, j) = normal(engine);
  }
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(gauss).householderQ();
  Eigen::VectorXd eig(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    eig(i) = n == 1 ? eig_min
                    : eig_min + (eig_max - eig_min) * static_cast<double>(i) /
                                    static_cast<double>(n - 1);
  }
  Eigen::MatrixXd a = q * eig.asDiagonal() * q.transpose();
  a = 0.5 * (a + a.transpose()).eval();

  Eigen::VectorXd x_pop(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x_pop(i) = uniform(engine);
  Eigen::VectorXd b = -(a * x_pop);
  return Quadratic(std::move(a), std::move(b));
}

double largest_eigenvalue(const Eigen::MatrixXd& m, double tol, std::size_t max_iterations) {
  if (m.rows() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.rows()).normalized();
  double estimate = 0.0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd w = m * v;
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (std::abs(next - estimate) <= tol * std::abs(next)) return next;
    estimate = next;
  }
  return estimate;
}

}  // namespace fastbelief::problems
