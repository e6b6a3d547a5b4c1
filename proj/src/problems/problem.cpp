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

#include "fastbelief/problems/problem.hpp"

#include <fmt/format.h>

#include <cmath>

#include "fastbelief/problems/softmax.hpp"
#include "fastbelief/random.hpp"

namespace fastbelief::problems {

namespace {

// Power iteration can land a hair under the true top eigenvalue.
constexpr double kLipschitzMargin = 1.01;

Eigen::Map<const Eigen::VectorXd> as_eigen(ConstVectorView x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

void add_noise(Eigen::VectorXd& out, double noise, std::uint64_t t, std::uint64_t seed,
               double scale) {
  Engine engine(derive_seed(seed, kNoiseStream, t));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) += scale * noise * normal(engine);
}

double quadratic_with_linear(ConstVectorView x, const Eigen::MatrixXd& a,
                             const Eigen::VectorXd& linear, std::span<double> grad) {
  const auto xv = as_eigen(x);
  const Eigen::VectorXd ax = a * xv;
  if (!grad.empty()) {
    require_same_length(grad.size(), x.size(), "quadratic gradient");
    for (Eigen::Index i = 0; i < ax.size(); ++i) grad[static_cast<std::size_t>(i)] = ax(i) + linear(i);
  }
  return 0.5 * xv.dot(ax) + linear.dot(xv);
}

// Cross-entropy Hessian in parameter space is (diag(p) - p p^T) kron z z^T with
// z = [x; 1]; the first factor has norm at most 1/2.
double softmax_lipschitz(const SoftmaxProblem& p, std::span<const double> weights) {
  const Dataset& data = *p.data;
  const auto d1 = static_cast<Eigen::Index>(data.dim() + 1);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d1, d1);
  Eigen::VectorXd z(d1);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const auto f = data.feature(i);
    for (std::size_t j = 0; j < f.size(); ++j) z(static_cast<Eigen::Index>(j)) = f[j];
    z(d1 - 1) = 1.0;
    gram.selfadjointView<Eigen::Lower>().rankUpdate(z, weights[i]);
  }
  gram = gram.selfadjointView<Eigen::Lower>();
  return kLipschitzMargin * (0.5 * largest_eigenvalue(gram) + 2.0 * std::max(p.sigma1, p.sigma2));
}

}  // namespace

std::string to_string(ProblemKind kind) {
  return kind == ProblemKind::softmax_l2 ? "softmax_l2" : "quadratic";
}

ProblemInstance ProblemInstance::softmax_l2(SoftmaxProblem p) {
  if (!p.data) throw InvalidArgument("softmax_l2 needs a dataset");
  if (!(p.sigma1 > 0) || !(p.sigma2 > 0) || !std::isfinite(p.sigma1) || !std::isfinite(p.sigma2)) {
    throw InvalidArgument("softmax_l2 needs sigma1 > 0 and sigma2 > 0");
  }
  if (p.batch_size < 1 || p.batch_size > p.data->size()) {
    throw InvalidArgument(
        fmt::format("batch size {} outside [1, {}]", p.batch_size, p.data->size()));
  }
  if (p.mode == SamplingMode::full_batch && p.batch_size != p.data->size()) {
    throw InvalidArgument("full-batch sampling requires batch_size == number of samples");
  }
  ProblemInstance inst;
  inst.sigma_ = 2.0 * std::min(p.sigma1, p.sigma2);
  inst.spec_ = std::move(p);
  return inst;
}

ProblemInstance ProblemInstance::quadratic(QuadraticProblem p, std::optional<double> sigma) {
  if (!(p.noise >= 0) || !std::isfinite(p.noise)) {
    throw InvalidArgument("quadratic noise must be finite and nonnegative");
  }
  const double lmin = p.q.smallest_eigenvalue();
  if (!(lmin > 0)) {
    throw InvalidArgument(fmt::format("quadratic is not strongly convex (lambda_min = {})", lmin));
  }
  ProblemInstance inst;
  if (sigma) {
    if (!(*sigma > 0) || *sigma > lmin * (1 + 1e-12)) {
      throw InvalidArgument(
          fmt::format("supplied sigma {} must lie in (0, lambda_min = {}]", *sigma, lmin));
    }
    inst.sigma_ = *sigma;
  } else {
    inst.sigma_ = lmin;
  }
  inst.quadratic_lmax_ = kLipschitzMargin * largest_eigenvalue(p.q.a());
  inst.spec_ = std::move(p);
  return inst;
}

ProblemKind ProblemInstance::kind() const noexcept {
  return std::holds_alternative<SoftmaxProblem>(spec_) ? ProblemKind::softmax_l2
                                                       : ProblemKind::quadratic;
}

std::size_t ProblemInstance::dimension() const noexcept {
  if (const auto* s = std::get_if<SoftmaxProblem>(&spec_)) return softmax_param_count(*s->data);
  return std::get<QuadraticProblem>(spec_).q.dimension();
}

const SoftmaxProblem& ProblemInstance::softmax() const {
  if (const auto* s = std::get_if<SoftmaxProblem>(&spec_)) return *s;
  throw InvalidArgument("problem is not softmax_l2");
}

const QuadraticProblem& ProblemInstance::quadratic_problem() const {
  if (const auto* q = std::get_if<QuadraticProblem>(&spec_)) return *q;
  throw InvalidArgument("problem is not quadratic");
}

OnlineLoss ProblemInstance::round(std::uint64_t t, std::uint64_t seed) const {
  OnlineLoss loss;
  loss.owner_ = this;
  if (const auto* s = std::get_if<SoftmaxProblem>(&spec_)) {
    loss.batch_ = sample_batch(*s->data, s->batch_size, t, seed, s->mode);
  } else {
    const auto& q = std::get<QuadraticProblem>(spec_);
    loss.linear_ = q.q.b();
    if (q.noise > 0) add_noise(loss.linear_, q.noise, t, seed, 1.0);
    loss.batch_.round = t;
  }
  return loss;
}

PrefixObjective ProblemInstance::prefix(std::size_t rounds, std::uint64_t seed) const {
  if (rounds < 1) throw InvalidArgument("prefix objective needs at least one round");
  PrefixObjective obj;
  obj.owner_ = this;
  obj.rounds_ = rounds;
  if (const auto* s = std::get_if<SoftmaxProblem>(&spec_)) {
    obj.counts_.assign(s->data->size(), 0.0);
    for (std::size_t t = 1; t <= rounds; ++t) {
      for (std::size_t i : sample_batch(*s->data, s->batch_size, t, seed, s->mode).indices) {
        obj.counts_[i] += 1.0;
      }
    }
    const double normalizer = static_cast<double>(s->batch_size) * static_cast<double>(rounds);
    Vector weights(obj.counts_.size());
    for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = obj.counts_[i] / normalizer;
    obj.lipschitz_ = softmax_lipschitz(*s, weights);
  } else {
    const auto& q = std::get<QuadraticProblem>(spec_);
    obj.linear_ = q.q.b();
    if (q.noise > 0) {
      const double scale = 1.0 / static_cast<double>(rounds);
      for (std::size_t t = 1; t <= rounds; ++t) add_noise(obj.linear_, q.noise, t, seed, scale);
    }
    obj.lipschitz_ = quadratic_lmax_;
  }
  return obj;
}

double ProblemInstance::objective(ConstVectorView x) const {
  if (const auto* s = std::get_if<SoftmaxProblem>(&spec_)) {
    const Vector ones(s->data->size(), 1.0);
    return softmax_l2_weighted(x, *s->data, ones, static_cast<double>(s->data->size()), s->sigma1,
                               s->sigma2, {});
  }
  return quadratic_loss(x, std::get<QuadraticProblem>(spec_).q);
}

Vector ProblemInstance::objective_gradient(ConstVectorView x) const {
  if (const auto* s = std::get_if<SoftmaxProblem>(&spec_)) {
    const Vector ones(s->data->size(), 1.0);
    Vector grad(x.size());
    softmax_l2_weighted(x, *s->data, ones, static_cast<double>(s->data->size()), s->sigma1,
                        s->sigma2, grad);
    return grad;
  }
  return quadratic_grad(x, std::get<QuadraticProblem>(spec_).q);
}

double OnlineLoss::value(ConstVectorView x) const {
  if (const auto* s = std::get_if<SoftmaxProblem>(&owner_->spec_)) {
    return softmax_l2_loss(x, batch_, *s->data, s->sigma1, s->sigma2);
  }
  const auto& q = std::get<QuadraticProblem>(owner_->spec_);
  require_same_length(x.size(), q.q.dimension(), "quadratic point");
  return quadratic_with_linear(x, q.q.a(), linear_, {});
}

Vector OnlineLoss::gradient(ConstVectorView x) const {
  if (const auto* s = std::get_if<SoftmaxProblem>(&owner_->spec_)) {
    return softmax_l2_grad(x, batch_, *s->data, s->sigma1, s->sigma2);
  }
  const auto& q = std::get<QuadraticProblem>(owner_->spec_);
  require_same_length(x.size(), q.q.dimension(), "quadratic point");
  Vector grad(x.size());
  quadratic_with_linear(x, q.q.a(), linear_, grad);
  return grad;
}

double PrefixObjective::value(ConstVectorView x) const { return value_and_gradient(x, {}); }

double PrefixObjective::value_and_gradient(ConstVectorView x, std::span<double> grad) const {
  if (const auto* s = std::get_if<SoftmaxProblem>(&owner_->spec_)) {
    const double normalizer = static_cast<double>(s->batch_size) * static_cast<double>(rounds_);
    return softmax_l2_weighted(x, *s->data, counts_, normalizer, s->sigma1, s->sigma2, grad);
  }
  const auto& q = std::get<QuadraticProblem>(owner_->spec_);
  require_same_length(x.size(), q.q.dimension(), "quadratic point");
  return quadratic_with_linear(x, q.q.a(), linear_, grad);
}

Vector finite_diff_grad(const ScalarOracle& f, ConstVectorView x, double h) {
  if (!(h > 0)) throw InvalidArgument("finite-difference step must be positive");
  Vector probe(x.begin(), x.end());
  Vector grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = probe[i];
    probe[i] = xi + h;
    const double up = f(probe);
    probe[i] = xi - h;
    const double down = f(probe);
    probe[i] = xi;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace fastbelief::problems
