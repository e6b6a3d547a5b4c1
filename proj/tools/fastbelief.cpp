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

// Command-line front end: fastbelief run|compare|check|bound|probe.

#include <CLI11.hpp>

#include <iostream>

#include "fastbelief/report/commands.hpp"

namespace fr = fastbelief::report;

int main(int argc, char** argv) {
  CLI::App app{"FastAdaBelief experiment harness"};
  app.require_subcommand(1, 1);

  fr::CommandOptions opt;
  std::string config, out, trace, select = "final_loss";
  std::uint64_t seed = 0;
  double r = 0.0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config, "experiment config file");
    if (needs_config) c->required();
    c->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides [run] out)");
    sub->add_option("--seed", seed, "run seed (overrides [run] seed)");
  };
  auto* run = app.add_subcommand("run", "play every (optimizer, alpha) cell and write its trace");
  auto* compare = app.add_subcommand("compare", "sweep the alpha grids and chart the best cells");
  auto* check = app.add_subcommand("check", "verify the trajectory conditions on a trace");
  auto* bound = app.add_subcommand("bound", "tabulate empirical regret against the bound");
  auto* probe = app.add_subcommand("probe", "stepsize table over the three gradient regimes");
  for (auto* sub : {run, compare, check, bound}) add_common(sub, true);
  add_common(probe, false);
  for (auto* sub : {run, compare}) {
    sub->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)");
  }
  compare->add_option("--select-alpha", select, "best-alpha criterion")
      ->check(CLI::IsMember({"final_loss", "final_regret"}));
  for (auto* sub : {check, bound}) {
    sub->add_option("--trace", trace, "trace CSV written by run")->required()->check(CLI::ExistingFile);
  }
  bound->add_option("--r", r, "use this r instead of the measured default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? fr::kExitOk : fr::kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (!config.empty()) opt.config = config;
  if (!out.empty()) opt.out = out;
  if (sub->count("--seed") > 0) opt.seed = seed;
  if (!trace.empty()) opt.trace = trace;
  if (sub->get_option_no_throw("--r") != nullptr && sub->count("--r") > 0) opt.r = r;
  opt.select = fr::parse_alpha_selection(select);
  opt.color = fr::color_allowed();
  return fr::run_command(sub->get_name(), opt, std::cout, std::cerr);
}
