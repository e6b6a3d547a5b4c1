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

#include "fastbelief/report/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "fastbelief/lab/bound.hpp"
#include "fastbelief/lab/regret.hpp"
#include "fastbelief/lab/scenarios.hpp"
#include "fastbelief/lab/trace.hpp"
#include "fastbelief/report/csv.hpp"
#include "fastbelief/report/svg.hpp"

namespace fastbelief::report {

namespace {

constexpr double kBandSlack = 1e-12;

std::filesystem::path out_dir(const ExperimentConfig& cfg, const CommandOptions& opt) {
  auto dir = opt.out ? *opt.out : cfg.run.out;
  std::filesystem::create_directories(dir);
  return dir;
}

std::uint64_t run_seed(const ExperimentConfig& cfg, const CommandOptions& opt) {
  return opt.seed.value_or(cfg.run.seed);
}

std::string verdict(bool pass, bool color) {
  if (!color) return pass ? "PASS" : "FAIL";
  return pass ? "\x1b[32mPASS\x1b[0m" : "\x1b[31mFAIL\x1b[0m";
}

/// Runs `work(i)` for i in [0, n) on up to `jobs` threads.
template <class F>
void parallel_for(std::size_t n, std::size_t jobs, F work) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) work(i);
  };
  std::vector<std::jthread> pool;
  for (std::size_t k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
}

struct CellResult {
  lab::TrajectoryTrace trace;
  double objective = 0.0;  ///< noise-free full objective at the final iterate
  std::exception_ptr error;
};

/// Plays every cell, writing `dir/trace_*.csv` per cell. Failures are kept
/// per cell so the rest of the sweep still completes.
std::vector<CellResult> play_cells(const ExperimentConfig& cfg, const std::vector<Cell>& cells,
                                   const problems::ProblemInstance& problem,
                                   const optim::FeasibleRegion& region, std::uint64_t seed,
                                   const std::filesystem::path& dir, std::size_t jobs) {
  std::vector<CellResult> results(cells.size());
  lab::RunOptions ro;
  ro.stride = cfg.run.stride;
  ro.keep_dense = false;
  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    try {
      auto& r = results[i];
      r.trace = lab::run_online(problem, cells[i].kind, cells[i].hp, region, cfg.run.rounds, seed, ro);
      r.objective = problem.objective(r.trace.x_final);
      write_trace_csv(dir / trace_file_name(cells[i]), r.trace);
    } catch (...) {
      results[i].error = std::current_exception();
    }
  });
  return results;
}

std::string error_text(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  }
}

bool is_numeric_failure(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const NumericError&) {
    return true;
  } catch (const ConvergenceError&) {
    return true;
  } catch (...) {
    return false;
  }
}

std::vector<std::uint64_t> checkpoints_with_end(const ExperimentConfig& cfg) {
  auto cps = cfg.resolved_checkpoints();
  if (cps.empty() || cps.back() != cfg.run.rounds) cps.push_back(cfg.run.rounds);
  return cps;
}

/// The cell a trace file belongs to: the only cell, or the one whose file
/// name matches.
const Cell& resolve_cell(const std::vector<Cell>& cells, const std::filesystem::path& trace) {
  if (cells.size() == 1) return cells.front();
  const auto name = trace.filename().string();
  for (const auto& c : cells) {
    if (trace_file_name(c) == name) return c;
  }
  throw InvalidArgument(fmt::format(
      "config has {} cells and none matches trace file '{}'; name it trace_<optimizer>_<alpha>.csv",
      cells.size(), name));
}

/// Replays the cell and confirms it reproduces the losses in the file.
lab::TrajectoryTrace replay(const Cell& cell,
                            const problems::ProblemInstance& problem,
                            const optim::FeasibleRegion& region, std::uint64_t seed,
                            const std::vector<TraceRow>& rows) {
  if (rows.empty()) throw ParseError("trace has no rows", 2);
  lab::RunOptions ro;
  ro.keep_dense = false;
  auto tr = lab::run_online(problem, cell.kind, cell.hp, region, rows.size(), seed, ro);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (tr.steps[k].loss != rows[k].loss || tr.steps[k].cum_loss != rows[k].cum_loss) {
      throw InvalidArgument(fmt::format(
          "trace does not match the config (seed {}) at t = {}; was it produced with another "
          "seed or config?",
          seed, k + 1));
    }
  }
  return tr;
}

}  // namespace

AlphaSelection parse_alpha_selection(std::string_view name) {
  if (name == "final_loss") return AlphaSelection::final_loss;
  if (name == "final_regret") return AlphaSelection::final_regret;
  throw InvalidArgument(fmt::format("unknown alpha selection '{}'", name));
}

std::vector<Cell> expand_cells(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  std::map<optim::OptimizerKind, int> seen;
  for (std::size_t k = 0; k < cfg.optimizers.size(); ++k) {
    const auto& o = cfg.optimizers[k];
    const int dup = seen[o.kind]++;
    std::string label(optim::to_string(o.kind));
    if (dup > 0) label += fmt::format("-{}", dup + 1);
    for (double a : o.alphas) {
      auto hp = o.hp;
      hp.alpha = a;
      cells.push_back({k, label, o.kind, hp});
    }
  }
  return cells;
}

std::string trace_file_name(const Cell& cell) {
  return fmt::format("trace_{}_{}.csv", cell.label, short_number(cell.hp.alpha));
}

int cmd_run(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  const auto problem = cfg.build_problem();
  const auto region = cfg.build_region(problem.dimension());
  const auto seed = run_seed(cfg, opt);
  const auto dir = out_dir(cfg, opt);
  const auto cells = expand_cells(cfg);
  const auto cps = checkpoints_with_end(cfg);

  auto results = play_cells(cfg, cells, problem, region, seed, dir, opt.jobs);
  int code = kExitOk;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    if (results[i].error) {
      fmt::print(out, "{} alpha={} FAILED: {}\n", c.label, short_number(c.hp.alpha),
                 error_text(results[i].error));
      code = is_numeric_failure(results[i].error) ? kExitNumeric : kExitConfig;
      continue;
    }
    const auto& tr = results[i].trace;
    const auto rep = lab::compute_regret(problem, region, tr, cps);
    std::string fits = "log_r2=n/a sqrt_r2=n/a";
    if (rep.fits) {
      fits = fmt::format("log_r2={:.6f} sqrt_r2={:.6f}", rep.fits->log_fit.r2, rep.fits->sqrt_fit.r2);
    }
    fmt::print(out, "{} alpha={} T={} final_loss={:.10g} objective={:.10g} regret={:.10g} {}\n",
               c.label, short_number(c.hp.alpha), tr.length(), tr.steps.back().loss,
               results[i].objective, rep.regret.back(), fits);
  }
  return code;
}

int cmd_compare(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  const auto problem = cfg.build_problem();
  const auto region = cfg.build_region(problem.dimension());
  const auto seed = run_seed(cfg, opt);
  const auto dir = out_dir(cfg, opt);
  const auto cell_dir = dir / "cells";
  std::filesystem::create_directories(cell_dir);
  const auto cells = expand_cells(cfg);

  auto results = play_cells(cfg, cells, problem, region, seed, cell_dir, opt.jobs);
  // Every cell replays the same loss sequence, so one comparator serves all.
  const auto hindsight = lab::best_in_hindsight(problem, region, cfg.run.rounds, seed);

  {
    std::ofstream csv(dir / "cells.csv", std::ios::binary);
    csv << "optimizer,alpha,final_loss,final_regret,status\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (results[i].error) {
        fmt::print(csv, "{},{},nan,nan,failed\n", cells[i].label, short_number(cells[i].hp.alpha));
        continue;
      }
      fmt::print(csv, "{},{},{:.17g},{:.17g},ok\n", cells[i].label, short_number(cells[i].hp.alpha),
                 results[i].objective, results[i].trace.steps.back().cum_loss - hindsight.value);
    }
  }

  // Per optimizer, the cell minimizing the selection score; ties keep the
  // earlier alpha in the grid.
  std::vector<std::ptrdiff_t> best(cfg.optimizers.size(), -1);
  std::vector<double> best_score(cfg.optimizers.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (results[i].error) continue;
    const double score = opt.select == AlphaSelection::final_loss
                             ? results[i].objective
                             : results[i].trace.steps.back().cum_loss - hindsight.value;
    const auto k = cells[i].optimizer;
    if (score < best_score[k]) {
      best_score[k] = score;
      best[k] = static_cast<std::ptrdiff_t>(i);
    }
  }

  int code = kExitOk;
  std::vector<ChartSeries> series;
  std::ofstream csv(dir / "compare.csv", std::ios::binary);
  csv << "optimizer,t,loss\n";
  for (std::size_t k = 0; k < best.size(); ++k) {
    if (best[k] < 0) {
      fmt::print(out, "{}: every alpha failed\n", optim::to_string(cfg.optimizers[k].kind));
      code = kExitNumeric;
      continue;
    }
    const auto& c = cells[static_cast<std::size_t>(best[k])];
    const auto& r = results[static_cast<std::size_t>(best[k])];
    ChartSeries s;
    s.name = fmt::format("{} (alpha={})", c.label, short_number(c.hp.alpha));
    for (const auto& rec : r.trace.steps) {
      fmt::print(csv, "{},{},{:.17g}\n", c.label, rec.t, rec.loss);
      s.x.push_back(static_cast<double>(rec.t));
      s.y.push_back(rec.loss);
    }
    series.push_back(std::move(s));
    fmt::print(out, "{} best_alpha={} final_loss={:.10g} final_regret={:.10g}\n", c.label,
               short_number(c.hp.alpha), r.objective,
               r.trace.steps.back().cum_loss - hindsight.value);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (results[i].error) {
      fmt::print(out, "{} alpha={} FAILED: {}\n", cells[i].label, short_number(cells[i].hp.alpha),
                 error_text(results[i].error));
    }
  }
  if (!series.empty()) {
    ChartOptions co;
    co.title = fmt::format("{} training loss, best alpha per optimizer ({})",
                           problems::to_string(problem.kind()),
                           opt.select == AlphaSelection::final_loss ? "final_loss" : "final_regret");
    std::ofstream(dir / "compare.svg", std::ios::binary) << render_line_chart(series, co);
  }
  return code;
}

int cmd_check(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  if (!opt.trace) throw InvalidArgument("check needs --trace");
  const auto rows = read_trace_csv(*opt.trace);
  const auto problem = cfg.build_problem();
  const auto region = cfg.build_region(problem.dimension());
  const auto cells = expand_cells(cfg);
  const auto& cell = resolve_cell(cells, *opt.trace);
  const auto tr = replay(cell, problem, region, run_seed(cfg, opt), rows);

  // Gamma and the Condition 4 increments come straight from the file; zeta
  // needs the gradients, which the replay supplies.
  double gamma = std::numeric_limits<double>::infinity(), lo = gamma, hi = -gamma;
  std::uint64_t gamma_t = 0, band_fail = 0;
  const double upper = problem.sigma() * (1.0 - cell.hp.beta1);
  for (const auto& r : rows) {
    if (r.gamma_min < gamma) gamma = r.gamma_min, gamma_t = r.t;
    lo = std::min(lo, r.cond4_min);
    hi = std::max(hi, r.cond4_max);
    if (band_fail == 0 && (r.cond4_min < 0 || r.cond4_max > upper + kBandSlack)) band_fail = r.t;
  }
  double zeta = 0.0;
  for (const auto& s : tr.steps) zeta = std::max(zeta, s.cond3_zeta);

  const bool gamma_ok = gamma >= 0;
  const bool band_ok = band_fail == 0;
  const bool zeta_ok = std::isfinite(zeta);
  fmt::print(out, "trace {} ({} rounds, {} alpha={}, sigma={:.6g})\n", opt.trace->filename().string(),
             rows.size(), cell.label, short_number(cell.hp.alpha), problem.sigma());
  fmt::print(out, "gamma_min  {:.6e} at t={}  {}\n", gamma, gamma_t, verdict(gamma_ok, opt.color));
  fmt::print(out, "cond4      [{:.6e}, {:.6e}] vs [0, {:.6e}]{}  {}\n", lo, hi, upper,
             band_ok ? "" : fmt::format(" first violation at t={}", band_fail),
             verdict(band_ok, opt.color));
  fmt::print(out, "cond3_zeta {:.6e}  {}\n", zeta, verdict(zeta_ok, opt.color));
  return gamma_ok && band_ok && zeta_ok ? kExitOk : kExitCheckFailed;
}

int cmd_bound(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  if (!opt.trace) throw InvalidArgument("bound needs --trace");
  const auto rows = read_trace_csv(*opt.trace);
  const auto cells = expand_cells(cfg);
  const auto& cell = resolve_cell(cells, *opt.trace);
  if (cell.kind != optim::OptimizerKind::fastadabelief) {
    throw InvalidArgument("the regret bound is stated for fastadabelief traces only");
  }
  // Fail on an undefined lambda-term before doing any work.
  {
    lab::BoundConstants probe;
    probe.n = 1;
    probe.rounds = 1;
    probe.alpha = cell.hp.alpha;
    probe.beta1 = cell.hp.beta1;
    probe.lambda = cell.hp.lambda;
    probe.delta = cell.hp.delta;
    lab::bound_terms(probe);
  }
  const auto problem = cfg.build_problem();
  const auto region = cfg.build_region(problem.dimension());
  const auto seed = run_seed(cfg, opt);
  const auto tr = replay(cell, problem, region, seed, rows);

  std::vector<std::uint64_t> cps;
  for (auto c : cfg.resolved_checkpoints()) {
    if (c <= rows.size()) cps.push_back(c);
  }
  if (cps.empty() || cps.back() != rows.size()) cps.push_back(rows.size());
  const auto rep = lab::compute_regret(problem, region, tr, cps);

  const auto rule = lab::measure_constants(tr, region, 1, opt.r).r_rule;
  fmt::print(out, "# r_rule\t{}\n", lab::describe(rule));
  out << "checkpoint\tregret\tbound\tratio\n";
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cps.size(); ++k) {
    const double regret = rows[cps[k] - 1].cum_loss - rep.hindsight_values[k];
    const double bound = lab::theoretical_bound(lab::measure_constants(tr, region, cps[k], opt.r));
    const double ratio = regret / bound;
    worst = std::max(worst, ratio);
    fmt::print(out, "{}\t{:.10g}\t{:.10g}\t{:.6e}\n", cps[k], regret, bound, ratio);
  }
  fmt::print(out, "# max_ratio\t{:.6e}\n", worst);
  return kExitOk;
}

int cmd_probe(const CommandOptions& opt, std::ostream& out) {
  std::filesystem::path dir = opt.out.value_or("out");
  if (opt.config && !opt.out) dir = parse_config(*opt.config).run.out;
  std::filesystem::create_directories(dir);
  const lab::ProbeSettings settings;
  const auto rows = lab::probe_table(settings);

  std::ofstream csv(dir / "probe.csv", std::ios::binary);
  csv << "region,region_name,t,optimizer,m,second_moment,step_abs\n";
  for (const auto& r : rows) {
    fmt::print(csv, "{},{},{},{},{:.17g},{:.17g},{:.17g}\n", r.region, r.region_name, r.t,
               optim::to_string(r.kind), r.m, r.second_moment, r.step_abs);
  }

  fmt::print(out, "# |Delta_t| at alpha={} delta={}\n", short_number(settings.alpha),
             short_number(settings.delta));
  out << "region\tt";
  for (auto k : lab::kProbeOptimizers) out << '\t' << optim::to_string(k);
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); i += std::size(lab::kProbeOptimizers)) {
    fmt::print(out, "{}\t{}", rows[i].region_name, rows[i].t);
    for (std::size_t j = 0; j < std::size(lab::kProbeOptimizers); ++j) {
      fmt::print(out, "\t{:.6e}", rows[i + j].step_abs);
    }
    out << '\n';
  }
  return kExitOk;
}

int run_command(const std::string& command, const CommandOptions& opt, std::ostream& out,
                std::ostream& err) {
  try {
    if (command != "run" && command != "compare" && command != "check" && command != "bound" &&
        command != "probe") {
      fmt::print(err, "error: unknown command '{}'\n", command);
      return kExitUsage;
    }
    if (command == "probe") return cmd_probe(opt, out);
    if (!opt.config) {
      fmt::print(err, "error: {} needs --config\n", command);
      return kExitUsage;
    }
    const auto cfg = parse_config(*opt.config);
    if (command == "run") return cmd_run(cfg, opt, out);
    if (command == "compare") return cmd_compare(cfg, opt, out);
    if (command == "check") return cmd_check(cfg, opt, out);
    return cmd_bound(cfg, opt, out);
  } catch (const NumericError& e) {
    fmt::print(err, "numeric failure: {} (t = {})\n", e.what(), e.step());
    return kExitNumeric;
  } catch (const ConvergenceError& e) {
    fmt::print(err, "numeric failure: {}\n", e.what());
    return kExitNumeric;
  } catch (const Error& e) {
    // ParseError, InvalidArgument, DimensionError: bad config or input file.
    fmt::print(err, "error: {}\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }
}

bool color_allowed() {
  const char* no_color = std::getenv("NO_COLOR");
  if (no_color != nullptr && no_color[0] != '\0') return false;
  return isatty(fileno(stdout)) != 0;
}

}  // namespace fastbelief::report
