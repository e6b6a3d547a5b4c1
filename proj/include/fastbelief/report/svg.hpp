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

#include <string>
#include <vector>

#include "fastbelief/common.hpp"

namespace fastbelief::report {

struct ChartSeries {
  std::string name;
  Vector x;
  Vector y;
};

struct ChartOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label = "loss";
  int width = 800;
  int height = 500;
  std::size_t max_points = 1000;  ///< per polyline, evenly thinned; the last point is kept
};

/**
 * Line chart with a log10 y axis, one polyline per series, and a legend.
 * When some y <= 0 every series is shifted by (eps - min y) before taking
 * logs and the axis label says so. Output depends only on the inputs.
 */
std::string render_line_chart(const std::vector<ChartSeries>& series, const ChartOptions& options);

}  // namespace fastbelief::report
