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

#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "doctest.h"
#include "fastbelief/lab/bound.hpp"
#include "fastbelief/lab/conditions.hpp"
#include "fastbelief/lab/regret.hpp"
#include "fastbelief/lab/scenarios.hpp"
#include "fastbelief/lab/trace.hpp"
#include "fastbelief/problems/softmax.hpp"
#include "test_util.hpp"

using namespace fastbelief;
using namespace fastbelief::lab;
using optim::FeasibleRegion;
using optim::HyperParams;
using optim::OptimizerKind;
using problems::ProblemInstance;
using problems::Quadratic;
using problems::QuadraticProblem;

namespace {

ProblemInstance diag_quadratic(std::vector<double> diag, std::vector<double> b, double noise = 0.0) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd bv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = diag[static_cast<std::size_t>(i)];
    bv(i) = b[static_cast<std::size_t>(i)];
  }
  return ProblemInstance::quadratic(QuadraticProblem{Quadratic(a, bv), noise});
}

ProblemInstance noisy_quadratic(std::size_t n = 5) {
  return ProblemInstance::quadratic(
      QuadraticProblem{problems::make_spectral_quadratic(3, n, 0.2, 1.0, 1.0), 0.1});
}

std::shared_ptr<const problems::Dataset> small_data(std::uint64_t seed = 5) {
  return std::make_shared<const problems::Dataset>(
      problems::synth_classification(seed, 3, 4, 60, 1.0));
}

ProblemInstance small_softmax(std::size_t batch = 8) {
  problems::SoftmaxProblem p;
  p.data = small_data();
  p.batch_size = batch;
  return ProblemInstance::softmax_l2(p);
}

HyperParams fab(double alpha) {
  return HyperParams::defaults_for(OptimizerKind::fastadabelief, alpha);
}

// A scalar trace built by hand: dense rounds 1..T with the given g and s.
TrajectoryTrace synthetic_trace(const Vector& g, const Vector& s, const HyperParams& hp) {
  TrajectoryTrace tr;
  tr.hp = hp;
  double s_hat = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    StepRecord r;
    r.t = k + 1;
    tr.steps.push_back(r);
    s_hat = std::max(s_hat, s[k]);
    tr.dense.push_back({k + 1, Vector{0.0}, Vector{g[k]}, Vector{0.0}, Vector{s[k]}, Vector{s_hat}});
  }
  return tr;
}

TrajectoryTrace truncate(const TrajectoryTrace& tr, std::size_t len) {
  TrajectoryTrace out = tr;
  out.steps.resize(len);
  out.dense.erase(std::remove_if(out.dense.begin(), out.dense.end(),
                                 [&](const DenseRecord& d) { return d.t > len; }),
                  out.dense.end());
  return out;
}

}  // namespace

TEST_SUITE("trace") {
  TEST_CASE("zero linear term from the minimizer gives zero losses and no motion") {
    const auto prob = diag_quadratic({1.0, 2.0}, {0.0, 0.0});
    const auto region = FeasibleRegion::box(2, -1, 1);
    const auto tr = run_online(prob, OptimizerKind::fastadabelief, fab(0.1), region, 50, 1);
    REQUIRE(tr.length() == 50);
    for (const auto& r : tr.steps) {
      CHECK(r.loss == 0.0);
      CHECK(r.cum_loss == 0.0);
      CHECK(r.grad_inf == 0.0);
    }
    CHECK(tr.x_final == Vector{0.0, 0.0});
  }

  TEST_CASE("one round gives one record") {
    const auto prob = diag_quadratic({1.0}, {-1.0});
    const auto tr = run_online(prob, OptimizerKind::adam, HyperParams::defaults_for(OptimizerKind::adam, 0.1),
                               FeasibleRegion::box(1, -2, 2), 1, 1);
    REQUIRE(tr.length() == 1);
    CHECK(tr.steps[0].t == 1);
    CHECK(tr.steps[0].loss == 0.0);
    CHECK(tr.steps[0].grad_inf == 1.0);
    CHECK(tr.has_full_series());
    CHECK(tr.dense.front().t == 1);
  }

  TEST_CASE("identical inputs give bitwise-identical traces") {
    const auto prob = small_softmax();
    const auto region = FeasibleRegion::box(prob.dimension(), -10, 10);
    const auto a = run_online(prob, OptimizerKind::fastadabelief, fab(0.1), region, 300, 11);
    const auto b = run_online(prob, OptimizerKind::fastadabelief, fab(0.1), region, 300, 11);
    const auto c = run_online(prob, OptimizerKind::fastadabelief, fab(0.1), region, 300, 12);
    REQUIRE(a.length() == b.length());
    for (std::size_t k = 0; k < a.length(); ++k) CHECK(a.steps[k].loss == b.steps[k].loss);
    CHECK(a.x_final == b.x_final);
    CHECK(a.x_final != c.x_final);
  }

  TEST_CASE("cumulative loss is the running sum and x stays feasible") {
    const auto prob = noisy_quadratic();
    const auto region = FeasibleRegion::box(5, -0.5, 0.5);
    const auto tr = run_online(prob, OptimizerKind::adabelief,
                               HyperParams::defaults_for(OptimizerKind::adabelief, 0.3), region, 200, 4);
    double sum = 0.0;
    for (const auto& r : tr.steps) {
      sum += r.loss;
      CHECK_REL(r.cum_loss, sum, 1e-12);
    }
    for (const auto& d : tr.dense) CHECK(region.contains(d.x));
    CHECK(region.contains(tr.x_final));
  }

  TEST_CASE("overflowing losses are reported with their round") {
    // Huge features: a clipped SGD step drives the logits to infinity.
    auto data = std::make_shared<const problems::Dataset>(
        Vector{1e308, 1e308}, std::vector<std::size_t>{0, 1}, 1, 2);
    problems::SoftmaxProblem p;
    p.data = data;
    p.batch_size = 2;
    p.mode = problems::SamplingMode::full_batch;
    const auto prob = ProblemInstance::softmax_l2(p);
    const auto region = FeasibleRegion::box(prob.dimension(), -10, 10);
    auto hp = HyperParams::defaults_for(OptimizerKind::sgd_momentum, 1.0);
    // Break the class symmetry so the first step moves the weights.
    RunOptions opts;
    opts.x0 = Vector{1.0, 0.0, 0.0, 0.0};
    try {
      run_online(prob, OptimizerKind::sgd_momentum, hp, region, 10, 1, opts);
      FAIL("expected NumericError");
    } catch (const NumericError& e) {
      CHECK(e.step() >= 1);
      CHECK(e.step() <= 10);
    }
  }

  TEST_CASE("thinning keeps the geometric checkpoints and the ends") {
    const auto prob = diag_quadratic({1.0}, {-0.5});
    RunOptions opts;
    opts.stride = 100;
    const auto tr = run_online(prob, OptimizerKind::fastadabelief, fab(0.1),
                               FeasibleRegion::box(1, -1, 1), 1000, 1, opts);
    CHECK_FALSE(tr.has_full_series());
    std::vector<std::uint64_t> ts;
    for (const auto& d : tr.dense) ts.push_back(d.t);
    for (std::uint64_t want : {1, 100, 128, 256, 512, 1000}) {
      CHECK(std::find(ts.begin(), ts.end(), want) != ts.end());
    }
    CHECK(std::find(ts.begin(), ts.end(), 150) == ts.end());
    CHECK(default_stride(10000) == 1);
    CHECK(default_stride(10001) == 10);
  }

  TEST_CASE("geometric checkpoints") {
    CHECK(geometric_checkpoints(1024) == std::vector<std::uint64_t>{128, 256, 512, 1024});
    CHECK(geometric_checkpoints(1000) == std::vector<std::uint64_t>{128, 256, 512, 1000});
    CHECK(geometric_checkpoints(100).empty());
    CHECK(geometric_checkpoints(10, 2) == std::vector<std::uint64_t>{2, 4, 8, 10});
  }
}

TEST_SUITE("hindsight") {
  TEST_CASE("interior minimizer matches the linear solve") {
    const auto prob = ProblemInstance::quadratic(
        QuadraticProblem{problems::make_spectral_quadratic(9, 6, 0.1, 1.0, 2.0), 0.0});
    const auto region = FeasibleRegion::box(6, -100, 100);
    const auto res = best_in_hindsight(prob, region, 7, 1);
    const auto want = prob.quadratic_problem().q.minimizer();
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(res.x_star[i] - want[i]) <= 1e-8);
    CHECK_REL(res.value, 7.0 * problems::quadratic_loss(want, prob.quadratic_problem().q), 1e-10);
  }

  TEST_CASE("box excluding the minimizer lands on the nearer endpoint") {
    // f = 1/2 x^2 - 3x has its minimizer at 3; over [-1, 1] the answer is 1.
    const auto prob = diag_quadratic({1.0}, {-3.0});
    const auto res = best_in_hindsight(prob, FeasibleRegion::box(1, -1, 1), 4, 1);
    CHECK(res.x_star[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_REL(res.value, 4 * (0.5 - 3.0), 1e-12);
    const auto low = best_in_hindsight(diag_quadratic({1.0}, {3.0}), FeasibleRegion::box(1, -1, 1), 4, 1);
    CHECK(low.x_star[0] == doctest::Approx(-1.0).epsilon(1e-12));
  }

  TEST_CASE("one free softmax weight matches a fine grid search") {
    // K = 2, d = 1: four parameters, three of them pinned to zero by the box.
    auto data = std::make_shared<const problems::Dataset>(
        Vector{0.5, -1.2, 2.0, 0.3, -0.7}, std::vector<std::size_t>{0, 1, 0, 1, 1}, 1, 2);
    problems::SoftmaxProblem p;
    p.data = data;
    p.batch_size = 2;
    const auto prob = ProblemInstance::softmax_l2(p);
    REQUIRE(prob.dimension() == 4);
    const FeasibleRegion region(Vector{-3, 0, 0, 0}, Vector{3, 0, 0, 0});
    const auto res = best_in_hindsight(prob, region, 3, 21);

    std::vector<problems::OnlineLoss> losses;
    for (std::uint64_t t = 1; t <= 3; ++t) losses.push_back(prob.round(t, 21));
    auto total = [&](double w) {
      double s = 0.0;
      for (const auto& f : losses) s += f.value(Vector{w, 0, 0, 0});
      return s;
    };
    double best = std::numeric_limits<double>::infinity(), arg = 0.0;
    for (long k = -3000000; k <= 3000000; ++k) {
      const double w = static_cast<double>(k) * 1e-6;
      const double v = total(w);
      if (v < best) {
        best = v;
        arg = w;
      }
    }
    CHECK(std::abs(res.x_star[0] - arg) <= 1e-6);
    CHECK(res.value <= best + 1e-12);
    CHECK(res.x_star[1] == 0.0);
  }

  TEST_CASE("iteration cap raises ConvergenceError with the last iterate") {
    const auto prob = ProblemInstance::quadratic(
        QuadraticProblem{problems::make_spectral_quadratic(2, 8, 0.001, 1.0, 2.0), 0.0});
    HindsightOptions opts;
    opts.max_iterations = 3;
    try {
      best_in_hindsight(prob, FeasibleRegion::box(8, -50, 50), 1, 1, opts);
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK(e.last_iterate().size() == 8);
      CHECK(e.residual() > 1e-10);
    }
  }
}

TEST_SUITE("regret") {
  TEST_CASE("learner sitting on the comparator has zero regret") {
    const auto prob = diag_quadratic({2.0, 1.0}, {-1.0, 0.5});
    const auto region = FeasibleRegion::box(2, -3, 3);
    RunOptions opts;
    opts.x0 = Vector{0.5, -0.5};
    const auto tr = run_online(prob, OptimizerKind::fastadabelief, fab(0.1), region, 256, 1, opts);
    const auto rep = compute_regret(prob, region, tr, geometric_checkpoints(256, 8));
    for (double r : rep.regret) CHECK(std::abs(r) <= 1e-12);
  }

  TEST_CASE("three rounds by hand") {
    // f = x^2 - x, SGD without momentum at a constant 0.25 from x = 0:
    // x = 0, 0.25, 0.375 with losses 0, -0.1875, -0.234375; x* = 0.5, f* = -0.25.
    const auto prob = diag_quadratic({2.0}, {-1.0});
    const auto region = FeasibleRegion::box(1, -5, 5);
    auto hp = HyperParams::defaults_for(OptimizerKind::sgd_momentum, 0.25);
    hp.beta1 = 0.0;
    hp.schedule = optim::StepSchedule::constant;
    const auto tr = run_online(prob, OptimizerKind::sgd_momentum, hp, region, 3, 1);
    CHECK(tr.steps[1].loss == -0.1875);
    CHECK(tr.steps[2].loss == -0.234375);
    const auto rep = compute_regret(prob, region, tr, {1, 2, 3});
    CHECK_REL(rep.regret[0], 0.25, 1e-10);
    CHECK_REL(rep.regret[1], 0.3125, 1e-10);
    CHECK_REL(rep.regret[2], 0.328125, 1e-10);
    CHECK_REL(rep.ratio[2], 0.328125 / 3, 1e-10);
    CHECK_FALSE(rep.fits.has_value());
  }

  TEST_CASE("single round regret is f_1(x_1) - min f_1") {
    const auto prob = diag_quadratic({4.0}, {2.0});
    const auto region = FeasibleRegion::box(1, -1, 1);
    const auto tr = run_online(prob, OptimizerKind::adam, HyperParams::defaults_for(OptimizerKind::adam, 0.1),
                               region, 1, 1);
    const auto rep = compute_regret(prob, region, tr, {1});
    CHECK_REL(rep.regret[0], 0.0 - (-0.5), 1e-10);
  }

  TEST_CASE("a checkpoint agrees with the full computation on the truncated trace") {
    const auto prob = noisy_quadratic();
    const auto region = FeasibleRegion::box(5, -2, 2);
    const auto tr = run_online(prob, OptimizerKind::fastadabelief, fab(1.0), region, 512, 3);
    const auto full = compute_regret(prob, region, tr, {128, 256, 512});
    const auto part = compute_regret(prob, region, truncate(tr, 256), {256});
    CHECK_REL(full.regret[1], part.regret[0], 1e-8);
    CHECK_REL(full.cumulative_loss[1], part.cumulative_loss[0], 1e-14);
    CHECK(full.hindsight_x_star.size() == 5);
  }

  TEST_CASE("softmax regret is nonnegative-ish and consistent") {
    const auto prob = small_softmax();
    const auto region = FeasibleRegion::box(prob.dimension(), -10, 10);
    const auto tr = run_online(prob, OptimizerKind::fastadabelief, fab(0.1), region, 1024, 2);
    const auto rep = compute_regret(prob, region, tr, geometric_checkpoints(1024));
    REQUIRE(rep.fits.has_value());
    for (std::size_t k = 0; k < rep.regret.size(); ++k) {
      CHECK_REL(rep.regret[k], rep.cumulative_loss[k] - rep.hindsight_values[k], 1e-12);
      CHECK(rep.regret[k] > 0);
    }
  }

  TEST_CASE("checkpoint validation") {
    const auto prob = diag_quadratic({1.0}, {0.0});
    const auto region = FeasibleRegion::box(1, -1, 1);
    const auto tr = run_online(prob, OptimizerKind::fastadabelief, fab(0.1), region, 10, 1);
    CHECK_THROWS_AS(compute_regret(prob, region, tr, {11}), InvalidArgument);
    CHECK_THROWS_AS(compute_regret(prob, region, tr, {0}), InvalidArgument);
    // Unordered checkpoints are evaluated as given; they just get no fit.
    const auto unordered = compute_regret(prob, region, tr, {5, 3, 7, 1});
    CHECK_FALSE(unordered.fits.has_value());
    CHECK_REL(unordered.regret[1], compute_regret(prob, region, tr, {3}).regret[0], 1e-9);
    CHECK_THROWS_AS(compute_regret(prob, region, tr, {}), InvalidArgument);
  }
}

TEST_SUITE("growth fits") {
  const std::vector<std::uint64_t> kT{128, 256, 512, 1024, 2048, 4096, 8192, 16384};

  TEST_CASE("exact logarithmic and square-root series") {
    Vector log_r, sqrt_r;
    for (auto t : kT) {
      log_r.push_back(5.0 * std::log(static_cast<double>(t)));
      sqrt_r.push_back(2.0 * std::sqrt(static_cast<double>(t)));
    }
    const auto a = fit_growth(kT, log_r);
    CHECK(a.log_fit.b == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(std::abs(a.log_fit.a) <= 1e-10);
    CHECK(a.log_fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.sqrt_fit.r2 < 0.95);
    const auto b = fit_growth(kT, sqrt_r);
    CHECK(b.sqrt_fit.b == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(b.sqrt_fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.log_fit.r2 < b.sqrt_fit.r2);
  }

  TEST_CASE("noisy logarithmic series matches the independent least squares") {
    // 3 ln T plus frozen U(-0.01, 0.01) noise; reference from tests/oracles/lab_oracle.py.
    const double noise[] = {0.000121, 0.001302, 0.000238, 0.009444,
                            0.002298, 0.001366, -0.004264, 0.001090};
    Vector r;
    for (std::size_t k = 0; k < kT.size(); ++k) r.push_back(3.0 * std::log(static_cast<double>(kT[k])) + noise[k]);
    const auto f = fit_growth(kT, r);
    CHECK_REL(f.log_fit.b, 2.9995739068896521, 1e-10);
    CHECK(std::abs(f.log_fit.a - 0.0045504999999952918) <= 1e-9);
    CHECK_REL(f.log_fit.r2, 0.99999946572372289, 1e-12);
    CHECK_REL(f.sqrt_fit.a, 15.777050288773717, 1e-10);
    CHECK_REL(f.sqrt_fit.b, 0.11830025984380231, 1e-10);
    CHECK_REL(f.sqrt_fit.r2, 0.89859353742278791, 1e-10);
  }

  TEST_CASE("input validation") {
    CHECK_THROWS_AS(fit_growth({1, 2, 3}, Vector{1, 2, 3}), InvalidArgument);
    CHECK_THROWS_AS(fit_growth({1, 2, 2, 4}, Vector{1, 2, 3, 4}), InvalidArgument);
    CHECK_THROWS(fit_growth({1, 2, 3, 4}, Vector{1, 2, 3}));
  }
}

TEST_SUITE("bound") {
  BoundConstants example() {
    BoundConstants c;
    c.n = 1;
    c.delta = 1.0;
    c.d_inf = 2.0;
    c.alpha = 1.0;
    c.beta1 = 0.0;
    c.r = 1.0;
    c.sum_g_norms = 1.0;
    c.rounds = std::exp(1.0);
    c.lambda = 1.0;
    return c;
  }

  TEST_CASE("worked example totals 4.5") {
    const auto terms = bound_terms(example());
    CHECK_REL(terms.delta_term, 2.0, 1e-15);
    CHECK_REL(terms.log_term, 1.0, 1e-15);
    CHECK_REL(terms.constant_term, 1.5, 1e-15);
    CHECK(terms.lambda_term == 0.0);
    CHECK_REL(theoretical_bound(example()), 4.5, 1e-15);
  }

  TEST_CASE("momentum and lambda enter through the closed form") {
    auto c = example();
    c.beta1 = 0.5;
    c.lambda = 0.5;
    c.g_inf = 3.0;
    const auto t = bound_terms(c);
    // n d D^2 / (2a(1-b1)) = 4 / 1
    CHECK_REL(t.delta_term, 4.0, 1e-15);
    // a r^2 ln T S / (1-b1)^2 = 4
    CHECK_REL(t.log_term, 4.0, 1e-15);
    // (2 + 1) / (2 * 0.25) = 6
    CHECK_REL(t.constant_term, 6.0, 1e-15);
    // 1 * 0.5 * 0.5 * 4 * (3 + 1) / (2 * 0.5 * 0.25) = 16
    CHECK_REL(t.lambda_term, 16.0, 1e-15);
    CHECK_REL(t.total, 30.0, 1e-15);
  }

  TEST_CASE("without gradients only the diameter term remains") {
    auto c = example();
    c.sum_g_norms = 0.0;
    c.rounds = 1000;
    CHECK_REL(theoretical_bound(c), 2.0, 1e-15);
  }

  TEST_CASE("lambda = 1 with momentum is rejected and names the term") {
    auto c = example();
    c.beta1 = 0.9;
    try {
      theoretical_bound(c);
      FAIL("expected InvalidArgument");
    } catch (const InvalidArgument& e) {
      CHECK(std::string(e.what()).find("lambda") != std::string::npos);
    }
    c.beta1 = 1.0;
    c.lambda = 0.5;
    CHECK_THROWS_AS(theoretical_bound(c), InvalidArgument);
  }

  TEST_CASE("measured constants on a single round") {
    // A = I, b = (-1, 2) from the origin: g_1 = (-1, 2).
    const auto prob = diag_quadratic({1.0, 1.0}, {-1.0, 2.0});
    const auto region = FeasibleRegion::box(2, -3, 3);
    const auto hp = fab(0.1);
    const auto tr = run_online(prob, OptimizerKind::fastadabelief, hp, region, 1, 1);
    const auto c = measure_constants(tr, region);
    CHECK(c.g_inf == 2.0);
    CHECK_REL(c.sum_g_norms, 5.0, 1e-15);
    CHECK(c.d_inf == 6.0);
    CHECK(c.n == 2);
    CHECK(c.rounds == 1.0);
    // s_1 = 0.9 (0.9 g)^2; smallest at |g| = 1.
    CHECK_REL(c.r, 1.0 / std::sqrt(0.729 + 0.1), 1e-12);
    CHECK(c.r_rule == RRule::measured_default);
    const auto user = measure_constants(tr, region, 0, 7.0);
    CHECK(user.r == 7.0);
    CHECK(user.r_rule == RRule::user_supplied);
  }

  TEST_CASE("zero gradients give zero gradient constants") {
    const auto prob = diag_quadratic({1.0, 2.0}, {0.0, 0.0});
    const auto region = FeasibleRegion::box(2, -1, 1);
    const auto tr = run_online(prob, OptimizerKind::fastadabelief, fab(0.1), region, 20, 1);
    const auto c = measure_constants(tr, region);
    CHECK(c.g_inf == 0.0);
    CHECK(c.sum_g_norms == 0.0);
    CHECK_REL(c.r, 1.0 / std::sqrt(0.1 / 20), 1e-12);
  }

  TEST_CASE("measured constants agree with a direct recomputation") {
    const auto prob = small_softmax();
    const auto region = FeasibleRegion::box(prob.dimension(), -10, 10);
    const auto hp = fab(0.1);
    const auto tr = run_online(prob, OptimizerKind::fastadabelief, hp, region, 300, 8);
    REQUIRE(tr.has_full_series());
    for (std::uint64_t upto : {1u, 57u, 300u}) {
      const std::size_t n = prob.dimension();
      Vector g4(n, 0.0);
      double g_inf = 0.0, r = 0.0;
      for (std::uint64_t t = 1; t <= upto; ++t) {
        const auto& d = tr.dense[t - 1];
        for (std::size_t i = 0; i < n; ++i) {
          g_inf = std::max(g_inf, std::abs(d.g[i]));
          g4[i] += std::pow(d.g[i], 4);
          r = std::max(r, 1.0 / std::sqrt(d.s_hat[i] + hp.delta / static_cast<double>(t)));
        }
      }
      double sum = 0.0;
      for (double v : g4) sum += std::sqrt(v);
      const auto c = measure_constants(tr, region, upto);
      CHECK_REL(c.g_inf, g_inf, 1e-15);
      CHECK_REL(c.sum_g_norms, sum, 1e-12);
      CHECK_REL(c.r, r, 1e-12);
      CHECK(c.rounds == static_cast<double>(upto));
    }
    CHECK_THROWS_AS(measure_constants(tr, region, 301), InvalidArgument);
  }
}

TEST_SUITE("conditions") {
  TEST_CASE("constant belief moment gives a constant increment c / alpha") {
    const double c = 0.3;
    const auto hp = fab(0.1);
    const auto tr = synthetic_trace(Vector(50, 1.0), Vector(50, c * c), hp);
    const auto rep = check_condition4(tr, 100.0);
    for (std::size_t k = 0; k < rep.lhs_min.size(); ++k) {
      CHECK_REL(rep.lhs_min[k], c / 0.1, 1e-12);
      CHECK(rep.lhs_max[k] == rep.lhs_min[k]);
    }
    CHECK(rep.pass);
    CHECK(rep.upper == doctest::Approx(10.0));
    const auto fail = check_condition4(tr, 1.0);
    CHECK_FALSE(fail.pass);
    CHECK(fail.first_failure == 1);
  }

  TEST_CASE("zero belief moment gives zero increments") {
    const auto tr = synthetic_trace(Vector(10, 0.0), Vector(10, 0.0), fab(0.1));
    const auto rep = check_condition4(tr, 0.0);
    for (double v : rep.lhs_max) CHECK(v == 0.0);
    CHECK(rep.pass);
  }

  TEST_CASE("increments of a random monotone series") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 0.01);
    Vector s;
    double acc = 0.0;
    for (int k = 0; k < 200; ++k) s.push_back(acc += u(rng));
    const auto hp = fab(0.5);
    const auto tr = synthetic_trace(Vector(200, 1.0), s, hp);
    const auto sc = check_condition4(tr, 1.0);
    const auto st = check_condition4(tr, 1.0, ConditionVariant::standard);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double t = static_cast<double>(k + 1);
      const double prev = k == 0 ? 0.0 : std::sqrt(s[k - 1]);
      CHECK_REL(sc.lhs_min[k], (t * std::sqrt(s[k]) - (t - 1) * prev) / 0.5, 1e-12);
      CHECK_REL(st.lhs_min[k], (std::sqrt(t) * std::sqrt(s[k]) - std::sqrt(t - 1) * prev) / 0.5, 1e-12);
    }
    CHECK(std::isinf(st.upper));
    CHECK(st.pass);
  }

  TEST_CASE("thinned traces are rejected") {
    const auto prob = diag_quadratic({1.0}, {-0.5});
    RunOptions opts;
    opts.stride = 10;
    const auto tr = run_online(prob, OptimizerKind::fastadabelief, fab(0.1),
                               FeasibleRegion::box(1, -1, 1), 100, 1, opts);
    CHECK_THROWS_AS(check_condition4(tr, 1.0), InvalidArgument);
    CHECK_THROWS_AS(check_condition3(tr), InvalidArgument);
    CHECK_THROWS_AS(check_gamma_psd(tr), InvalidArgument);
  }

  TEST_CASE("accumulated-gradient condition on unit gradients") {
    // Reference from the expanded product-sum in tests/oracles/lab_oracle.py.
    const auto tr = synthetic_trace(Vector(3, 1.0), Vector(3, 0.0), fab(0.1));
    const auto rep = check_condition3(tr);
    CHECK_REL(rep.zeta[0], 0.10540925533894598, 1e-13);
    CHECK_REL(rep.zeta[0], 0.1 / std::sqrt(0.9), 1e-13);
    CHECK_REL(rep.zeta[1], 0.072739296745330792, 1e-13);
    CHECK_REL(rep.zeta[2], 0.058879583378962708, 1e-13);
    CHECK(rep.zeta_max == rep.zeta[0]);
    const auto zeros = check_condition3(synthetic_trace(Vector(5, 0.0), Vector(5, 0.0), fab(0.1)));
    for (double z : zeros.zeta) CHECK(z == 0.0);
  }

  TEST_CASE("recursion agrees with the quadratic-cost direct sum") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector g;
    for (int k = 0; k < 120; ++k) g.push_back(normal(rng));
    const auto hp = fab(0.2);
    const auto rep = check_condition3(synthetic_trace(g, Vector(120, 0.0), hp));
    for (std::size_t t = 1; t <= g.size(); t += 7) {
      double w = 0.0, g2 = 0.0;
      for (std::size_t j = 1; j <= t; ++j) {
        double prod = 1.0;
        for (std::size_t k = j + 1; k <= t; ++k) prod *= hp.beta2_t(k);
        w += prod * (1 - hp.beta2_t(j)) * g[j - 1] * g[j - 1];
        g2 += g[j - 1] * g[j - 1];
      }
      const double want = std::sqrt(g2) / ((static_cast<double>(t) / 0.2) * std::sqrt(w));
      CHECK_REL(rep.zeta[t - 1], want, 1e-11);
    }
  }

  TEST_CASE("gamma of a constant s_hat under 1/t is positive and constant") {
    const auto hp = fab(0.1);
    const auto rep = check_gamma_psd(synthetic_trace(Vector(20, 1.0), Vector(20, 0.04), hp));
    for (double v : rep.per_step) CHECK_REL(v, 0.04 / 0.1, 1e-12);
    CHECK(rep.min > 0);
  }

  TEST_CASE("gamma goes negative when s_hat falls under 1/sqrt t") {
    // Not reachable by a running max, but the check only reads the series.
    auto hp = HyperParams::defaults_for(OptimizerKind::adam, 0.1);
    Vector s;
    for (int k = 1; k <= 30; ++k) s.push_back(1.0 / k);
    auto tr = synthetic_trace(Vector(30, 1.0), s, hp);
    for (std::size_t k = 0; k < s.size(); ++k) tr.dense[k].s_hat = Vector{s[k]};
    const auto rep = check_gamma_psd(tr);
    CHECK(rep.min < 0);
    CHECK(rep.argmin >= 2);
  }

  TEST_CASE("real FastAdaBelief runs keep gamma nonnegative") {
    const auto prob = small_softmax();
    const auto region = FeasibleRegion::box(prob.dimension(), -10, 10);
    const auto tr = run_online(prob, OptimizerKind::fastadabelief, fab(0.1), region, 1000, 6);
    const auto rep = check_gamma_psd(tr);
    CHECK(rep.min >= 0);
    for (std::size_t k = 0; k < tr.length(); ++k) CHECK(tr.steps[k].gamma_min == rep.per_step[k]);
  }
}

TEST_SUITE("scenarios") {
  TEST_CASE("scripted gradients") {
    const auto sc = region_scenarios(4, 2.0);
    REQUIRE(sc.size() == 3);
    CHECK(sc[0].gradients == Vector(4, 2e-3));
    CHECK(sc[1].gradients == Vector{2, -2, 2, -2});
    CHECK(sc[2].gradients == Vector(4, 2.0));
    CHECK(sc[2].name == "large_g_small_change");
    CHECK_THROWS_AS(region_scenarios(0), InvalidArgument);
  }

  TEST_CASE("constant gradients drive the belief moment to zero but not v") {
    const auto sc = region_scenarios(5000);
    const auto fm = freeze_moments(sc[2].gradients, 5000);
    CHECK(fm.m == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fm.v == doctest::Approx(1.0 - std::pow(0.999, 5000)).epsilon(1e-12));
    CHECK(fm.s < 1e-4);
    const auto alt = freeze_moments(sc[1].gradients, 5000);
    CHECK(alt.s > 0.5);
  }

  TEST_CASE("steps scale as expected with the gradient scale") {
    ProbeSettings a, b;
    a.steps = b.steps = {100};
    b.scale = 10.0;
    const auto ra = probe_table(a);
    const auto rb = probe_table(b);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t k = 0; k < ra.size(); ++k) {
      if (ra[k].kind == OptimizerKind::sgd_momentum) {
        CHECK_REL(rb[k].step_abs, 10.0 * ra[k].step_abs, 1e-12);
      } else if (ra[k].kind == OptimizerKind::adam && ra[k].region != 1) {
        // m / sqrt(v) is scale free up to epsilon, which matters for tiny g.
        CHECK_REL(rb[k].step_abs, ra[k].step_abs, 1e-5);
      }
      CHECK_REL(rb[k].m, 10.0 * ra[k].m, 1e-12);
    }
  }

  TEST_CASE("table at t = 100 matches the closed forms") {
    // Reference from tests/oracles/lab_oracle.py.
    const double want[3][5] = {
        {9.9997343860111234e-07, 0.0032406938433727243, 3.1620431435634741e-06,
         0.016055828066433315, 3.1621875346793258e-06},
        {5.263018097900592e-05, 0.00017056835607901603, 1.6967958847752172e-05,
         0.0001800781180204089, 1.7903318698285567e-05},
        {0.00099997343860111238, 0.0032407987655013043, 0.00032239121810729123,
         0.016058403866255417, 0.0014317981070937633},
    };
    ProbeSettings st;
    st.steps = {100};
    const auto rows = probe_table(st);
    REQUIRE(rows.size() == 15);
    for (const auto& row : rows) {
      std::size_t col = 0;
      while (kProbeOptimizers[col] != row.kind) ++col;
      CHECK_REL(row.step_abs, want[row.region - 1][col], 1e-11);
    }
  }

  TEST_CASE("without delta FastAdaBelief is AdaBelief rescaled by sqrt t") {
    ProbeSettings st;
    st.delta = 0.0;
    const auto rows = probe_table(st);
    for (const auto& fast : rows) {
      if (fast.kind != OptimizerKind::fastadabelief) continue;
      for (const auto& belief : rows) {
        if (belief.kind == OptimizerKind::adabelief && belief.region == fast.region && belief.t == fast.t) {
          // equal up to the epsilon in AdaBelief's divisor
          CHECK_REL(fast.step_abs * std::sqrt(static_cast<double>(fast.t)), belief.step_abs, 1e-3);
        }
      }
    }
  }

  TEST_CASE("region 3 at large t: belief steps outgrow Adam's") {
    for (const auto& row : probe_table()) {
      if (row.region != 3 || row.t != 1000 || row.kind != OptimizerKind::adabelief) continue;
      for (const auto& other : probe_table()) {
        if (other.region == 3 && other.t == 1000 && other.kind == OptimizerKind::adam) {
          CHECK(row.step_abs > other.step_abs);
        }
      }
    }
  }

  TEST_CASE("FastAdaBelief takes the largest step where adaptivity matters most") {
    const auto rows = probe_table();
    for (const auto& row : rows) {
      if (row.region != 3 || row.kind != OptimizerKind::fastadabelief) continue;
      for (const auto& other : rows) {
        if (other.region == 3 && other.t == row.t && other.kind == OptimizerKind::sadam) {
          CHECK(row.step_abs > other.step_abs);
        }
      }
    }
  }
}
