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

#include "fastbelief/report/csv.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace fastbelief::report {

namespace {

double parse_field(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(fmt::format("'{}' is not a number", s), line);
  }
  return v;
}

}  // namespace

TraceRow to_row(const lab::StepRecord& r) {
  return {r.t,       r.loss,    r.cum_loss,  r.grad_inf,  r.step_inf,
          r.alpha_t, r.beta2_t, r.cond4_min, r.cond4_max, r.gamma_min};
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << kTraceHeader << '\n';
  for (const auto& r : rows) {
    fmt::print(out, "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
               r.t, r.loss, r.cum_loss, r.grad_inf_norm, r.step_inf_norm, r.alpha_t, r.beta2_t,
               r.cond4_min, r.cond4_max, r.gamma_min);
  }
}

void write_trace_csv(const std::filesystem::path& path, const lab::TrajectoryTrace& trace) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.steps.size());
  for (const auto& rec : trace.steps) rows.push_back(to_row(rec));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  write_trace_csv(out, rows);
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError("empty trace file", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw ParseError("unexpected trace header", 1);
  std::vector<TraceRow> rows;
  std::vector<std::string> f;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    f.clear();
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 10) {
      throw ParseError(fmt::format("expected 10 fields, got {}", f.size()), lineno);
    }
    TraceRow r;
    const double t = parse_field(f[0], lineno);
    if (!(t >= 1) || t != static_cast<double>(static_cast<std::uint64_t>(t))) {
      throw ParseError("t must be a positive integer", lineno);
    }
    r.t = static_cast<std::uint64_t>(t);
    if (r.t != rows.size() + 1) throw ParseError("rounds must be consecutive from 1", lineno);
    double* fields[] = {&r.loss,    &r.cum_loss,  &r.grad_inf_norm, &r.step_inf_norm, &r.alpha_t,
                        &r.beta2_t, &r.cond4_min, &r.cond4_max,     &r.gamma_min};
    for (std::size_t k = 0; k < 9; ++k) *fields[k] = parse_field(f[k + 1], lineno);
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument(fmt::format("cannot read trace '{}'", path.string()));
  return read_trace_csv(in);
}

std::string short_number(double v) { return fmt::format("{}", v); }

}  // namespace fastbelief::report
