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

#include "fastbelief/report/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fastbelief/lab/trace.hpp"
#include "fastbelief/problems/softmax.hpp"

namespace fastbelief::report {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const Entry& e, const std::string& key) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || e.value.empty()) {
    throw ParseError(fmt::format("{}: '{}' is not a number", key, e.value), e.line);
  }
  return v;
}

std::uint64_t to_uint(const Entry& e, const std::string& key) {
  std::uint64_t v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || e.value.empty()) {
    throw ParseError(fmt::format("{}: '{}' is not a nonnegative integer", key, e.value), e.line);
  }
  return v;
}

/// Reads the entries of one section, rejecting keys outside `allowed`.
class Reader {
 public:
  Reader(const Section& s, std::set<std::string> allowed) : s_(s) {
    for (const auto& [key, e] : s.entries) {
      if (!allowed.contains(key)) {
        throw ParseError(fmt::format("unknown key '{}' in [{}]", key, s.name), e.line);
      }
    }
  }

  const Entry* find(const std::string& key) const {
    const auto it = s_.entries.find(key);
    return it == s_.entries.end() ? nullptr : &it->second;
  }
  bool has(const std::string& key) const { return find(key) != nullptr; }

  template <class T, class F>
  void read(const std::string& key, T& out, F convert) const {
    if (const auto* e = find(key)) out = convert(*e, key);
  }
  void number(const std::string& key, double& out) const { read(key, out, to_double); }
  template <class U>
  void integer(const std::string& key, U& out) const {
    read(key, out, [](const Entry& e, const std::string& k) { return static_cast<U>(to_uint(e, k)); });
  }

  /// Wraps semantic errors from the library with the offending line.
  template <class F>
  auto wrap(const std::string& key, F f) const {
    const auto* e = find(key);
    try {
      return f(*e);
    } catch (const InvalidArgument& ex) {
      throw ParseError(fmt::format("{}: {}", key, ex.what()), e->line);
    }
  }

 private:
  const Section& s_;
};

std::vector<Section> tokenize(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError("unterminated section header", line);
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (name != "problem" && name != "optimizer" && name != "run") {
        throw ParseError(fmt::format("unknown section [{}]", name), line);
      }
      if (name != "optimizer") {
        for (const auto& prev : sections) {
          if (prev.name == name) throw ParseError(fmt::format("duplicate section [{}]", name), line);
        }
      }
      sections.push_back({name, line, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
    if (sections.empty()) throw ParseError("key outside of any section", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line);
    if (value.empty()) throw ParseError(fmt::format("{}: empty value", key), line);
    auto& entries = sections.back().entries;
    if (entries.contains(key)) throw ParseError(fmt::format("duplicate key '{}'", key), line);
    entries.emplace(key, Entry{value, line});
  }
  return sections;
}

ProblemConfig read_problem(const Section& s, const std::filesystem::path& base) {
  ProblemConfig p;
  const std::set<std::string> common{"kind", "seed"};
  const std::set<std::string> quad{"dimension", "eig_min", "eig_max", "minimizer_scale", "noise",
                                   "sigma"};
  const std::set<std::string> soft{"dataset",  "classes", "features",   "samples", "separation",
                                   "sigma1",   "sigma2",  "batch_size", "sampling"};
  std::set<std::string> all = common;
  all.insert(quad.begin(), quad.end());
  all.insert(soft.begin(), soft.end());
  Reader r(s, all);
  if (!r.has("kind")) throw ParseError("[problem] needs 'kind'", s.line);
  const auto& kind = r.find("kind")->value;
  if (kind == "quadratic") {
    p.kind = problems::ProblemKind::quadratic;
  } else if (kind == "softmax_l2") {
    p.kind = problems::ProblemKind::softmax_l2;
  } else {
    throw ParseError(fmt::format("kind: unknown problem '{}'", kind), r.find("kind")->line);
  }
  const auto& foreign = p.kind == problems::ProblemKind::quadratic ? soft : quad;
  for (const auto& key : foreign) {
    if (const auto* e = r.find(key)) {
      throw ParseError(fmt::format("key '{}' does not apply to {}", key, kind), e->line);
    }
  }
  r.integer("seed", p.seed);
  r.integer("dimension", p.dimension);
  r.number("eig_min", p.eig_min);
  r.number("eig_max", p.eig_max);
  r.number("minimizer_scale", p.minimizer_scale);
  r.number("noise", p.noise);
  if (r.has("sigma")) {
    double v = 0.0;
    r.number("sigma", v);
    p.sigma = v;
  }
  if (const auto* e = r.find("dataset")) {
    if (e->value != "synthetic") {
      p.dataset = std::filesystem::path(e->value).is_absolute() ? std::filesystem::path(e->value)
                                                                 : base / e->value;
      if (!std::filesystem::exists(p.dataset)) {
        throw ParseError(fmt::format("dataset: '{}' does not exist", p.dataset.string()), e->line);
      }
    }
  }
  r.integer("classes", p.classes);
  r.integer("features", p.features);
  r.integer("samples", p.samples);
  r.number("separation", p.separation);
  r.number("sigma1", p.sigma1);
  r.number("sigma2", p.sigma2);
  r.integer("batch_size", p.batch_size);
  if (const auto* e = r.find("sampling")) {
    if (e->value == "with_replacement") {
      p.sampling = problems::SamplingMode::with_replacement;
    } else if (e->value == "full_batch") {
      p.sampling = problems::SamplingMode::full_batch;
    } else {
      throw ParseError(fmt::format("sampling: unknown mode '{}'", e->value), e->line);
    }
  }
  const auto bad = [&](const char* key, const char* msg) {
    const auto* e = r.find(key);
    throw ParseError(fmt::format("{}: {}", key, msg), e ? e->line : s.line);
  };
  if (p.kind == problems::ProblemKind::quadratic) {
    if (p.dimension < 1) bad("dimension", "must be >= 1");
    if (!(p.eig_min > 0)) bad("eig_min", "must be positive");
    if (!(p.eig_max >= p.eig_min)) bad("eig_max", "must be >= eig_min");
    if (!(p.noise >= 0)) bad("noise", "must be nonnegative");
    if (p.sigma && !(*p.sigma > 0)) bad("sigma", "must be positive");
  } else {
    if (!(p.sigma1 > 0)) bad("sigma1", "must be positive");
    if (!(p.sigma2 > 0)) bad("sigma2", "must be positive");
    if (p.batch_size < 1) bad("batch_size", "must be >= 1");
    if (p.dataset.empty()) {
      if (p.classes < 2) bad("classes", "must be >= 2");
      if (p.features < 1) bad("features", "must be >= 1");
      if (p.samples < p.classes) bad("samples", "must be >= classes");
      if (p.batch_size > p.samples) bad("batch_size", "exceeds the number of samples");
    }
  }
  return p;
}

OptimizerConfig read_optimizer(const Section& s) {
  Reader r(s, {"kind", "alpha", "beta1", "lambda", "beta2", "delta", "epsilon", "schedule",
               "final_rate", "gamma"});
  if (!r.has("kind")) throw ParseError("[optimizer] needs 'kind'", s.line);
  if (!r.has("alpha")) throw ParseError("[optimizer] needs 'alpha' (a value or a comma list)", s.line);
  OptimizerConfig o;
  o.kind = r.wrap("kind", [](const Entry& e) { return optim::parse_optimizer_kind(e.value); });
  o.hp = optim::HyperParams::defaults_for(o.kind, 1.0);
  const auto* alpha = r.find("alpha");
  for (const auto& item : split_list(alpha->value)) {
    o.alphas.push_back(to_double({item, alpha->line}, "alpha"));
  }
  r.number("beta1", o.hp.beta1);
  r.number("lambda", o.hp.lambda);
  r.number("delta", o.hp.delta);
  r.number("epsilon", o.hp.epsilon);
  r.number("final_rate", o.hp.adabound.final_rate);
  r.number("gamma", o.hp.adabound.gamma);
  if (const auto* e = r.find("beta2")) {
    // "0.999" holds beta2 fixed; "sadam:c" schedules 1 - c/t.
    if (e->value.rfind("sadam:", 0) == 0) {
      o.hp.beta2 = optim::ScheduledBeta2{to_double({e->value.substr(6), e->line}, "beta2")};
    } else {
      o.hp.beta2 = optim::ConstantBeta2{to_double(*e, "beta2")};
    }
  }
  if (r.has("schedule")) {
    o.hp.schedule =
        r.wrap("schedule", [](const Entry& e) { return optim::parse_step_schedule(e.value); });
  }
  for (double a : o.alphas) {
    auto hp = o.hp;
    hp.alpha = a;
    try {
      hp.validate_for(o.kind);
    } catch (const InvalidArgument& ex) {
      throw ParseError(fmt::format("[{}] {}", optim::to_string(o.kind), ex.what()), s.line);
    }
  }
  return o;
}

RunConfig read_run(const Section& s) {
  Reader r(s, {"rounds", "seed", "checkpoints", "checkpoint_first", "region_lo", "region_hi", "out",
               "stride"});
  RunConfig run;
  r.integer("rounds", run.rounds);
  r.integer("seed", run.seed);
  r.integer("checkpoint_first", run.checkpoint_first);
  r.number("region_lo", run.region_lo);
  r.number("region_hi", run.region_hi);
  if (const auto* e = r.find("out")) run.out = e->value;
  if (const auto* e = r.find("stride")) {
    if (e->value != "auto") run.stride = static_cast<std::size_t>(to_uint(*e, "stride"));
  }
  if (const auto* e = r.find("checkpoints")) {
    if (e->value != "geometric") {
      for (const auto& item : split_list(e->value)) {
        run.checkpoints.push_back(to_uint({item, e->line}, "checkpoints"));
      }
    }
  }
  const auto line_of = [&](const char* key) {
    const auto* e = r.find(key);
    return e ? e->line : s.line;
  };
  if (run.rounds < 1) throw ParseError("rounds: T must be >= 1", line_of("rounds"));
  if (!(run.region_lo < run.region_hi)) {
    throw ParseError("region_hi: must exceed region_lo", line_of("region_hi"));
  }
  if (run.checkpoint_first < 1) {
    throw ParseError("checkpoint_first: must be >= 1", line_of("checkpoint_first"));
  }
  if (run.stride && *run.stride < 1) throw ParseError("stride: must be >= 1", line_of("stride"));
  for (std::size_t k = 0; k < run.checkpoints.size(); ++k) {
    const auto c = run.checkpoints[k];
    if (c < 1 || c > run.rounds || (k > 0 && c <= run.checkpoints[k - 1])) {
      throw ParseError("checkpoints: must increase strictly within [1, rounds]",
                       line_of("checkpoints"));
    }
  }
  return run;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  bool have_problem = false;
  for (const auto& s : tokenize(text)) {
    if (s.name == "problem") {
      cfg.problem = read_problem(s, base_dir);
      have_problem = true;
    } else if (s.name == "optimizer") {
      cfg.optimizers.push_back(read_optimizer(s));
    } else {
      cfg.run = read_run(s);
    }
  }
  if (!have_problem) throw ParseError("missing [problem] section", 1);
  if (cfg.optimizers.empty()) throw ParseError("missing [optimizer] section", 1);
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument(fmt::format("cannot read config '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
}

problems::ProblemInstance ExperimentConfig::build_problem() const {
  const auto& p = problem;
  if (p.kind == problems::ProblemKind::quadratic) {
    auto q = problems::make_spectral_quadratic(p.seed, p.dimension, p.eig_min, p.eig_max,
                                               p.minimizer_scale);
    return problems::ProblemInstance::quadratic({std::move(q), p.noise}, p.sigma);
  }
  problems::SoftmaxProblem sp;
  sp.data = std::make_shared<const problems::Dataset>(
      p.dataset.empty()
          ? problems::synth_classification(p.seed, p.classes, p.features, p.samples, p.separation)
          : problems::load_csv(p.dataset));
  sp.sigma1 = p.sigma1;
  sp.sigma2 = p.sigma2;
  sp.batch_size = p.batch_size;
  sp.mode = p.sampling;
  return problems::ProblemInstance::softmax_l2(std::move(sp));
}

optim::FeasibleRegion ExperimentConfig::build_region(std::size_t dimension) const {
  return optim::FeasibleRegion::box(dimension, run.region_lo, run.region_hi);
}

std::vector<std::uint64_t> ExperimentConfig::resolved_checkpoints() const {
  if (!run.checkpoints.empty()) return run.checkpoints;
  return lab::geometric_checkpoints(run.rounds, run.checkpoint_first);
}

}  // namespace fastbelief::report
