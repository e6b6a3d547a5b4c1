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
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "fastbelief/problems/problem.hpp"
#include "fastbelief/problems/softmax.hpp"
#include "test_util.hpp"

using namespace fastbelief;
using namespace fastbelief::problems;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("fastbelief_" + name);
  std::ofstream(path, std::ios::binary) << body;
  return path;
}

// Small instance and reference values from tests/oracles/softmax_oracle.py.
Dataset oracle_dataset() {
  Vector features{1.0289999999999999,  1.6419999999999999,  1.147,
                  -0.97299999999999998, -1.393,             0.067000000000000004,
                  0.86099999999999999,  0.50900000000000001, 1.8100000000000001,
                  0.751,                0.64000000000000001, -0.73099999999999998,
                  -1.1080000000000001,  1.484,               0.049000000000000002,
                  0.81200000000000006,  -1.3759999999999999, -0.436,
                  -1.2909999999999999,  -0.77600000000000002, 0.90300000000000002,
                  -1.4810000000000001,  -0.53400000000000003, 0.16400000000000001};
  return Dataset(std::move(features), {0, 1, 2, 1, 0, 2}, 4, 3);
}
const Vector kOracleParams{-0.46800000000000003, -0.17699999999999999, -0.155,
                           0.29299999999999998,  -0.30199999999999999, 0.191,
                           0.040000000000000001, 0.29699999999999999,  0.157,
                           1.1599999999999999,   -0.46500000000000002, 0.83899999999999997,
                           -0.28199999999999997, -0.67100000000000004, 0.84799999999999998};
constexpr double kOracleLoss = 2.3736679555193594;
const Vector kOracleGrad{-0.24422838172529904, -0.40783592720795625, -0.21122479325420079,
                         0.25616756540364077,  0.68064264691415499,  -0.59672716521451663,
                         -0.15493591923445935, -0.39130404957351678, -0.44867426518885606,
                         1.028043092422473,    0.35456071248866022,  0.16371648416987597,
                         -0.033623636546819671, -0.51458174123970568, 0.54400537778652536};

double rel_error(const Vector& a, const Vector& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::max(std::abs(a[i]), std::abs(b[i])));
  }
  return den > 0 ? num / den : num;
}

Vector random_point(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_SUITE("softmax_l2") {
  TEST_CASE("zero parameters give log K") {
    const auto data = synth_classification(1, 4, 3, 20, 2.0);
    const Vector params(softmax_param_count(data), 0.0);
    const auto batch = sample_batch(data, 7, 1, 5);
    CHECK_REL(softmax_l2_loss(params, batch, data, 0.01, 0.01), std::log(4.0), 1e-14);
  }

  TEST_CASE("closed-form binary case") {
    const Dataset data(Vector{0.7}, {0}, 1, 2);
    const double c = 1.3, s2 = 0.05;
    const Vector params{0, 0, c, 0};
    const MiniBatch batch{{0}, 1};
    CHECK_REL(softmax_l2_loss(params, batch, data, 0.2, s2),
              std::log(1 + std::exp(-c)) + s2 * c * c, 1e-14);
  }

  TEST_CASE("random instance matches the independent reference") {
    const auto data = oracle_dataset();
    const MiniBatch batch{{0, 3, 3, 5, 1}, 1};
    CHECK_REL(softmax_l2_loss(kOracleParams, batch, data, 0.01, 0.02), kOracleLoss, 1e-13);
    const auto g = softmax_l2_grad(kOracleParams, batch, data, 0.01, 0.02);
    REQUIRE(g.size() == kOracleGrad.size());
    CHECK(rel_error(g, kOracleGrad) <= 1e-13);
  }

  TEST_CASE("symmetric two-class batch gives antisymmetric cross-entropy gradient") {
    const Dataset data(Vector{1.5, -1.5}, {0, 1}, 1, 2);
    const Vector params(4, 0.0);
    const MiniBatch batch{{0, 1}, 1};
    const auto g = softmax_l2_grad(params, batch, data, 0.01, 0.01);
    // packing (w_1, w_2, b_1, b_2)
    CHECK(g[0] == doctest::Approx(-g[1]));
    CHECK(g[2] == doctest::Approx(-g[3]));
    CHECK(g[2] == doctest::Approx(0.0));
    CHECK(g[0] == doctest::Approx(-0.75));
  }

  TEST_CASE("regularizer gradient is 2 sigma p") {
    // a single sample whose cross-entropy gradient is computed on the side
    const Dataset data(Vector{0.4, -0.2}, {1}, 2, 2);
    const Vector p{0.3, -0.1, 0.5, 0.2, -0.4, 0.25};
    const MiniBatch batch{{0}, 1};
    const auto with = softmax_l2_grad(p, batch, data, 1.0, 1.0);
    const auto without = softmax_l2_grad(p, batch, data, 1e-300, 1e-300);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK_REL(with[i] - without[i], 2 * p[i], 1e-12);
  }

  TEST_CASE("analytic gradient agrees with central differences") {
    std::mt19937_64 rng(77);
    const auto data = synth_classification(4, 3, 5, 40, 3.0);
    for (int k = 0; k < 100; ++k) {
      const auto batch = sample_batch(data, 8, k + 1, 99);
      const auto x = random_point(rng, softmax_param_count(data), 2.0);
      const auto f = [&](ConstVectorView p) {
        return softmax_l2_loss(p, batch, data, 0.01, 0.01);
      };
      const auto fd = finite_diff_grad(f, x, 1e-5);
      const auto g = softmax_l2_grad(x, batch, data, 0.01, 0.01);
      CHECK(rel_error(g, fd) <= 1e-6);
    }
  }

  TEST_CASE("errors") {
    const auto data = oracle_dataset();
    CHECK_THROWS_AS(softmax_l2_loss(Vector(3), MiniBatch{{0}, 1}, data, 0.01, 0.01),
                    DimensionError);
    CHECK_THROWS_AS(softmax_l2_loss(kOracleParams, MiniBatch{{}, 1}, data, 0.01, 0.01),
                    InvalidArgument);
    CHECK_THROWS_AS(softmax_l2_grad(kOracleParams, MiniBatch{{}, 1}, data, 0.01, 0.01),
                    InvalidArgument);
  }
}

TEST_SUITE("quadratic") {
  TEST_CASE("identity") {
    const Quadratic q(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2));
    CHECK(quadratic_loss(Vector{3, 4}, q) == 12.5);
    CHECK(quadratic_grad(Vector{3, 4}, q) == Vector{3, 4});
  }

  TEST_CASE("minimizer is stationary") {
    const auto q = make_spectral_quadratic(3, 6, 0.2, 2.0, 1.5);
    const auto g = quadratic_grad(q.minimizer(), q);
    CHECK(inf_norm(g) <= 1e-12);
  }

  TEST_CASE("asymmetric matrix rejected") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
    a(0, 1) = 1e-9;
    CHECK_THROWS_AS(Quadratic(a, Eigen::VectorXd::Zero(2)), InvalidArgument);
    a(0, 1) = 1e-13;
    CHECK_NOTHROW(Quadratic(a, Eigen::VectorXd::Zero(2)));
    CHECK_THROWS_AS(Quadratic(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(3)),
                    DimensionError);
  }

  TEST_CASE("random 3x3 SPD gradient matches central differences") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> normal(0, 1);
    Eigen::MatrixXd r(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = normal(rng);
    Eigen::MatrixXd a = r * r.transpose() + 0.5 * Eigen::MatrixXd::Identity(3, 3);
    a = (0.5 * (a + a.transpose())).eval();
    const Quadratic q(a, Eigen::Vector3d(0.3, -1.2, 2.0));
    for (int k = 0; k < 20; ++k) {
      const auto x = random_point(rng, 3, 3.0);
      const auto fd =
          finite_diff_grad([&](ConstVectorView p) { return quadratic_loss(p, q); }, x, 1e-5);
      CHECK(rel_error(quadratic_grad(x, q), fd) <= 1e-6);
    }
  }

  TEST_CASE("spectral generator") {
    const auto q = make_spectral_quadratic(5, 10, 0.1, 1.0, 2.0);
    CHECK_REL(q.smallest_eigenvalue(), 0.1, 1e-10);
    CHECK_REL(largest_eigenvalue(q.a()), 1.0, 1e-8);
    const auto again = make_spectral_quadratic(5, 10, 0.1, 1.0, 2.0);
    CHECK(q.a() == again.a());
    CHECK(q.b() == again.b());
    for (double v : q.minimizer()) CHECK(std::abs(v) <= 2.0 + 1e-9);
  }
}

TEST_SUITE("synth_classification") {
  TEST_CASE("deterministic for a fixed seed") {
    CHECK(synth_classification(7, 3, 4, 50, 2.0) == synth_classification(7, 3, 4, 50, 2.0));
    CHECK_FALSE(synth_classification(7, 3, 4, 50, 2.0) == synth_classification(8, 3, 4, 50, 2.0));
  }

  TEST_CASE("zero separation: class means coincide") {
    const auto data = synth_classification(2, 2, 3, 20000, 0.0);
    Vector mean0(3, 0), mean1(3, 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
      auto& target = data.label(i) == 0 ? mean0 : mean1;
      for (std::size_t j = 0; j < 3; ++j) target[j] += data.feature(i)[j] / 10000.0;
    }
    // sample means of N(0, 1) over 1e4 draws: 5 standard errors = 0.05
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(std::abs(mean0[j]) < 0.05);
      CHECK(std::abs(mean1[j]) < 0.05);
    }
  }

  TEST_CASE("separation 10 is linearly separable to 99%") {
    const auto data = synth_classification(13, 2, 2, 400, 10.0);
    // plain logistic regression by gradient descent, independent of softmax_l2
    double w0 = 0, w1 = 0, c = 0;
    for (int it = 0; it < 2000; ++it) {
      double g0 = 0, g1 = 0, gc = 0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        const auto x = data.feature(i);
        const double y = data.label(i) == 1 ? 1.0 : 0.0;
        const double p = 1 / (1 + std::exp(-(w0 * x[0] + w1 * x[1] + c)));
        g0 += (p - y) * x[0];
        g1 += (p - y) * x[1];
        gc += (p - y);
      }
      const double n = static_cast<double>(data.size());
      w0 -= 0.5 * g0 / n;
      w1 -= 0.5 * g1 / n;
      c -= 0.5 * gc / n;
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto x = data.feature(i);
      const bool pred = w0 * x[0] + w1 * x[1] + c > 0;
      if (pred == (data.label(i) == 1)) ++correct;
    }
    CHECK(static_cast<double>(correct) / static_cast<double>(data.size()) >= 0.99);
  }

  TEST_CASE("invalid sizes") {
    CHECK_THROWS_AS(synth_classification(1, 1, 2, 10, 1.0), InvalidArgument);
    CHECK_THROWS_AS(synth_classification(1, 2, 0, 10, 1.0), InvalidArgument);
    CHECK_THROWS_AS(synth_classification(1, 5, 2, 4, 1.0), InvalidArgument);
  }
}

TEST_SUITE("load_csv") {
  TEST_CASE("plain rows") {
    const auto d = load_csv(write_temp("plain.csv", "0,1.0,2.0\n1,3.0,4.0"));
    CHECK(d.dim() == 2);
    CHECK(d.classes() == 2);
    CHECK(d.size() == 2);
    CHECK(d.feature(1)[1] == 4.0);
  }

  TEST_CASE("header and CRLF give the same dataset") {
    const auto a = load_csv(write_temp("plain2.csv", "0,1.0,2.0\n1,3.0,4.0\n"));
    const auto b = load_csv(write_temp("header.csv", "label,x1,x2\r\n0,1.0,2.0\r\n1,3.0,4.0\r\n"));
    CHECK(a == b);
  }

  TEST_CASE("labels renumbered in order of first appearance") {
    const auto d = load_csv(write_temp("relabel.csv", "7,1\n3,2\n7,3\n-1,4\n"));
    CHECK(d.labels() == std::vector<std::size_t>{0, 1, 0, 2});
    CHECK(d.classes() == 3);
  }

  TEST_CASE("errors carry the line number") {
    try {
      load_csv(write_temp("ragged.csv", "label,a,b\n0,1,2\n1,3\n"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(load_csv(write_temp("nonnum.csv", "0,1,abc\n")), ParseError);
    CHECK_THROWS_AS(load_csv(write_temp("empty.csv", "label,a\n")), ParseError);
    CHECK_THROWS_AS(load_csv("/nonexistent/fastbelief.csv"), InvalidArgument);
  }
}

TEST_SUITE("sample_batch") {
  TEST_CASE("full batch and determinism") {
    const auto data = synth_classification(1, 2, 2, 10, 1.0);
    const auto full = sample_batch(data, 10, 1, 0, SamplingMode::full_batch);
    CHECK(full.indices == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(sample_batch(data, 4, 3, 7).indices == sample_batch(data, 4, 3, 7).indices);
    CHECK_FALSE(sample_batch(data, 4, 3, 7).indices == sample_batch(data, 4, 4, 7).indices);
    CHECK_THROWS_AS(sample_batch(data, 0, 1, 0), InvalidArgument);
    CHECK_THROWS_AS(sample_batch(data, 11, 1, 0), InvalidArgument);
  }

  TEST_CASE("index frequencies are uniform within 3 sigma") {
    const auto data = synth_classification(1, 2, 1, 20, 1.0);
    std::vector<double> counts(20, 0.0);
    const std::size_t draws = 100000;
    for (std::uint64_t t = 1; t <= draws / 10; ++t) {
      for (auto i : sample_batch(data, 10, t, 42).indices) counts[i] += 1;
    }
    const double p = 1.0 / 20.0;
    const double mean = draws * p;
    const double sd = std::sqrt(draws * p * (1 - p));
    for (double c : counts) CHECK(std::abs(c - mean) <= 3 * sd);
  }
}

TEST_SUITE("finite_diff_grad") {
  TEST_CASE("square and constant") {
    const auto sq = finite_diff_grad([](ConstVectorView x) { return x[0] * x[0]; }, Vector{3.0},
                                     1e-5);
    CHECK(std::abs(sq[0] - 6.0) <= 1e-8);
    const auto zero = finite_diff_grad([](ConstVectorView) { return 4.2; }, Vector{1, 2, 3}, 1e-3);
    CHECK(zero == Vector{0, 0, 0});
    CHECK_THROWS_AS(finite_diff_grad([](ConstVectorView) { return 0.0; }, Vector{1}, 0.0),
                    InvalidArgument);
  }
}

TEST_SUITE("problem instance") {
  TEST_CASE("sigma rules") {
    auto data = std::make_shared<const Dataset>(synth_classification(1, 3, 4, 60, 2.0));
    const auto soft = ProblemInstance::softmax_l2({data, 0.03, 0.01, 8});
    CHECK(soft.sigma() == 0.02);
    CHECK(soft.dimension() == 15);
    const auto quad = ProblemInstance::quadratic({make_spectral_quadratic(2, 4, 0.25, 1.0, 1.0)});
    CHECK_REL(quad.sigma(), 0.25, 1e-10);
    CHECK_THROWS_AS(
        ProblemInstance::quadratic({make_spectral_quadratic(2, 4, 0.25, 1.0, 1.0)}, 0.5),
        InvalidArgument);
    Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(2, 2);
    singular(0, 0) = 1;
    CHECK_THROWS_AS(ProblemInstance::quadratic({Quadratic(singular, Eigen::VectorXd::Zero(2))}),
                    InvalidArgument);
  }

  TEST_CASE("strong convexity witness") {
    std::mt19937_64 rng(31);
    auto data = std::make_shared<const Dataset>(synth_classification(9, 3, 4, 60, 2.0));
    const auto soft = ProblemInstance::softmax_l2({data, 0.01, 0.01, 8});
    const auto quad = ProblemInstance::quadratic({make_spectral_quadratic(4, 10, 0.1, 1.0, 2.0)});
    for (const ProblemInstance* inst : {&soft, &quad}) {
      const auto loss = inst->round(3, 17);
      const std::size_t n = inst->dimension();
      for (int k = 0; k < 1000; ++k) {
        const auto x = random_point(rng, n, 5.0);
        const auto y = random_point(rng, n, 5.0);
        const auto gy = loss.gradient(y);
        double lin = 0, dist2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
          lin += gy[i] * (x[i] - y[i]);
          dist2 += (x[i] - y[i]) * (x[i] - y[i]);
        }
        CHECK(loss.value(x) - loss.value(y) >= lin + 0.5 * inst->sigma() * dist2 - 1e-9);
      }
    }
  }

  TEST_CASE("gradient consistency at 100 points") {
    std::mt19937_64 rng(32);
    auto data = std::make_shared<const Dataset>(synth_classification(9, 3, 4, 60, 2.0));
    const auto soft = ProblemInstance::softmax_l2({data, 0.01, 0.01, 8});
    const auto quad = ProblemInstance::quadratic({make_spectral_quadratic(4, 10, 0.1, 1.0, 2.0), 0.3});
    for (const ProblemInstance* inst : {&soft, &quad}) {
      for (int k = 0; k < 100; ++k) {
        const auto loss = inst->round(k + 1, 5);
        const auto x = random_point(rng, inst->dimension(), 3.0);
        const auto fd = finite_diff_grad([&](ConstVectorView p) { return loss.value(p); }, x, 1e-5);
        CHECK(rel_error(loss.gradient(x), fd) <= 1e-6);
      }
    }
  }

  TEST_CASE("prefix objective is the average of the rounds") {
    std::mt19937_64 rng(33);
    auto data = std::make_shared<const Dataset>(synth_classification(9, 3, 4, 60, 2.0));
    const auto soft = ProblemInstance::softmax_l2({data, 0.01, 0.01, 8});
    const auto quad = ProblemInstance::quadratic({make_spectral_quadratic(4, 10, 0.1, 1.0, 2.0), 0.3});
    for (const ProblemInstance* inst : {&soft, &quad}) {
      const std::size_t rounds = 25;
      const auto prefix = inst->prefix(rounds, 12);
      const auto x = random_point(rng, inst->dimension(), 2.0);
      double sum = 0;
      Vector gsum(x.size(), 0.0);
      for (std::size_t t = 1; t <= rounds; ++t) {
        const auto loss = inst->round(t, 12);
        sum += loss.value(x);
        const auto g = loss.gradient(x);
        for (std::size_t i = 0; i < g.size(); ++i) gsum[i] += g[i] / rounds;
      }
      Vector g(x.size());
      CHECK_REL(prefix.value_and_gradient(x, g) * rounds, sum, 1e-12);
      CHECK(rel_error(g, gsum) <= 1e-12);
    }
  }

  TEST_CASE("lipschitz estimate bounds the gradient variation") {
    std::mt19937_64 rng(34);
    auto data = std::make_shared<const Dataset>(synth_classification(9, 3, 4, 60, 2.0));
    const auto soft = ProblemInstance::softmax_l2({data, 0.01, 0.01, 8});
    const auto prefix = soft.prefix(40, 3);
    for (int k = 0; k < 200; ++k) {
      const auto x = random_point(rng, soft.dimension(), 3.0);
      const auto y = random_point(rng, soft.dimension(), 3.0);
      Vector gx(x.size()), gy(x.size());
      prefix.value_and_gradient(x, gx);
      prefix.value_and_gradient(y, gy);
      double num = 0, den = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        num += (gx[i] - gy[i]) * (gx[i] - gy[i]);
        den += (x[i] - y[i]) * (x[i] - y[i]);
      }
      CHECK(std::sqrt(num / den) <= prefix.lipschitz());
    }
  }

  TEST_CASE("quadratic without noise repeats the same loss") {
    const auto quad = ProblemInstance::quadratic({make_spectral_quadratic(4, 3, 0.5, 1.0, 1.0)});
    const Vector x{0.1, 0.2, -0.3};
    CHECK(quad.round(1, 0).value(x) == quad.round(500, 9).value(x));
    CHECK(quad.round(1, 0).value(x) == quad.objective(x));
  }
}
