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

#include "fastbelief/lab/regret.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fastbelief::lab {

namespace {

double step_residual(const Vector& x, const Vector& grad, double inv_l,
                     const optim::FeasibleRegion& region, Vector& scratch) {
  for (std::size_t i = 0; i < x.size(); ++i) scratch[i] = x[i] - inv_l * grad[i];
  scratch = region.clip(scratch);
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(scratch[i] - x[i]));
  return r;
}

LinearFit least_squares(const Vector& phi, const Vector& y) {
  const auto n = static_cast<double>(phi.size());
  double mp = 0, my = 0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    mp += phi[k] / n;
    my += y[k] / n;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    sxx += (phi[k] - mp) * (phi[k] - mp);
    sxy += (phi[k] - mp) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (!(sxx > 0)) throw InvalidArgument("growth fit: degenerate design (all checkpoints equal)");
  LinearFit fit;
  fit.b = sxy / sxx;
  fit.a = my - fit.b * mp;
  double ss_res = 0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double e = y[k] - (fit.a + fit.b * phi[k]);
    ss_res += e * e;
  }
  fit.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace

HindsightResult best_in_hindsight(const problems::ProblemInstance& problem,
                                  const optim::FeasibleRegion& region, std::uint64_t rounds,
                                  std::uint64_t seed, const HindsightOptions& options) {
  const std::size_t n = problem.dimension();
  require_same_length(region.dimension(), n, "region");
  if (!(options.tolerance > 0)) throw InvalidArgument("hindsight tolerance must be positive");
  const auto objective = problem.prefix(rounds, seed);
  const double inv_l = 1.0 / objective.lipschitz();

  Vector x = region.clip(options.start ? *options.start : Vector(n, 0.0));
  Vector y = x;
  Vector x_next(n), grad(n), scratch(n);
  double momentum = 1.0;
  double residual = std::numeric_limits<double>::infinity();

  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    objective.value_and_gradient(y, grad);
    for (std::size_t i = 0; i < n; ++i) x_next[i] = y[i] - inv_l * grad[i];
    x_next = region.clip(x_next);

    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(x_next[i] - y[i]));
    if (moved <= options.tolerance) {
      // confirm with a plain projected-gradient step from the candidate
      objective.value_and_gradient(x_next, grad);
      residual = step_residual(x_next, grad, inv_l, region, scratch);
      if (residual <= options.tolerance) {
        HindsightResult out;
        out.value = static_cast<double>(rounds) * objective.value(x_next);
        out.x_star = std::move(x_next);
        out.iterations = it;
        out.residual = residual;
        return out;
      }
    } else {
      residual = moved;
    }

    // restart the momentum when it points against the descent direction
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += (y[i] - x_next[i]) * (x_next[i] - x[i]);
    if (dot > 0) momentum = 1.0;
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double beta = (momentum - 1.0) / next_momentum;
    for (std::size_t i = 0; i < n; ++i) y[i] = x_next[i] + beta * (x_next[i] - x[i]);
    momentum = next_momentum;
    x.swap(x_next);
  }
  throw ConvergenceError(
      fmt::format("best_in_hindsight: no convergence within {} iterations (residual {:.3g})",
                  options.max_iterations, residual),
      x, residual);
}

HindsightResult best_in_hindsight(const problems::ProblemInstance& problem,
                                  const optim::FeasibleRegion& region,
                                  const TrajectoryTrace& trace, const HindsightOptions& options) {
  if (trace.steps.empty()) throw InvalidArgument("best_in_hindsight needs a nonempty trace");
  return best_in_hindsight(problem, region, trace.length(), trace.seed, options);
}

GrowthFits fit_growth(const std::vector<std::uint64_t>& checkpoints, const Vector& regret) {
  require_same_length(checkpoints.size(), regret.size(), "regret series");
  if (checkpoints.size() < 4) {
    throw InvalidArgument(
        fmt::format("growth fit needs at least 4 checkpoints, got {}", checkpoints.size()));
  }
  for (std::size_t k = 1; k < checkpoints.size(); ++k) {
    if (checkpoints[k] <= checkpoints[k - 1]) {
      throw InvalidArgument("growth fit needs strictly increasing checkpoints");
    }
  }
  if (checkpoints.front() < 1) throw InvalidArgument("checkpoints start at 1");
  Vector log_t(checkpoints.size()), sqrt_t(checkpoints.size());
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    const auto c = static_cast<double>(checkpoints[k]);
    log_t[k] = std::log(c);
    sqrt_t[k] = std::sqrt(c);
  }
  return GrowthFits{least_squares(log_t, regret), least_squares(sqrt_t, regret)};
}

RegretReport compute_regret(const problems::ProblemInstance& problem,
                            const optim::FeasibleRegion& region, const TrajectoryTrace& trace,
                            const std::vector<std::uint64_t>& checkpoints,
                            const HindsightOptions& options) {
  if (checkpoints.empty()) throw InvalidArgument("compute_regret needs at least one checkpoint");
  RegretReport report;
  HindsightOptions opts = options;
  for (std::uint64_t c : checkpoints) {
    if (c < 1 || c > trace.length()) {
      throw InvalidArgument(
          fmt::format("checkpoint {} outside [1, {}]", c, trace.length()));
    }
    const auto hs = best_in_hindsight(problem, region, c, trace.seed, opts);
    const double cum = trace.steps[c - 1].cum_loss;
    report.checkpoints.push_back(c);
    report.cumulative_loss.push_back(cum);
    report.hindsight_values.push_back(hs.value);
    report.regret.push_back(cum - hs.value);
    report.ratio.push_back((cum - hs.value) / static_cast<double>(c));
    report.hindsight_x_star = hs.x_star;
    report.hindsight_value = hs.value;
    opts.start = hs.x_star;  // warm start the next prefix
  }
  bool increasing = true;
  for (std::size_t k = 1; k < report.checkpoints.size(); ++k) {
    increasing = increasing && report.checkpoints[k] > report.checkpoints[k - 1];
  }
  if (report.checkpoints.size() >= 4 && increasing) {
    report.fits = fit_growth(report.checkpoints, report.regret);
  }
  return report;
}

}  // namespace fastbelief::lab
