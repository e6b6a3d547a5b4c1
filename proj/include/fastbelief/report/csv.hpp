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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fastbelief/lab/trace.hpp"

namespace fastbelief::report {

/// One row of a trace CSV.
struct TraceRow {
  std::uint64_t t = 0;
  double loss = 0.0;
  double cum_loss = 0.0;
  double grad_inf_norm = 0.0;
  double step_inf_norm = 0.0;
  double alpha_t = 0.0;
  double beta2_t = 0.0;
  double cond4_min = 0.0;
  double cond4_max = 0.0;
  double gamma_min = 0.0;

  bool operator==(const TraceRow&) const = default;
};

inline constexpr const char* kTraceHeader =
    "t,loss,cum_loss,grad_inf_norm,step_inf_norm,alpha_t,beta2_t,cond4_min,cond4_max,gamma_min";

TraceRow to_row(const lab::StepRecord& rec);

/// Header plus one row per round, doubles with 17 significant digits.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
void write_trace_csv(const std::filesystem::path& path, const lab::TrajectoryTrace& trace);

/// Throws ParseError (with the line) on a wrong header, wrong field count,
/// unparsable numbers, or non-consecutive t.
std::vector<TraceRow> read_trace_csv(std::istream& in);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal for a double, used in file names and tables.
std::string short_number(double v);

}  // namespace fastbelief::report
