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

#include "fastbelief/report/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fastbelief::report {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_chart(const std::vector<ChartSeries>& series, const ChartOptions& opt) {
  if (series.empty()) throw InvalidArgument("chart needs at least one series");
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_min = x_lo, y_max = -x_lo;
  for (const auto& s : series) {
    require_same_length(s.x.size(), s.y.size(), "chart series");
    if (s.x.empty()) throw InvalidArgument(fmt::format("series '{}' is empty", s.name));
    for (double v : s.x) x_lo = std::min(x_lo, v), x_hi = std::max(x_hi, v);
    for (double v : s.y) y_min = std::min(y_min, v), y_max = std::max(y_max, v);
  }
  if (!std::isfinite(x_lo + x_hi + y_min + y_max)) {
    throw InvalidArgument("chart data must be finite");
  }

  double shift = 0.0;
  std::string y_label = opt.y_label;
  if (y_min <= 0) {
    const double eps = 1e-12 * std::max(1.0, y_max - y_min);
    shift = eps - y_min;
    y_label = fmt::format("{} - min + {:.0e}", opt.y_label, eps);
  }
  const double ly_lo = std::floor(std::log10(y_min + shift));
  double ly_hi = std::ceil(std::log10(y_max + shift));
  if (ly_hi <= ly_lo) ly_hi = ly_lo + 1;
  if (x_hi <= x_lo) x_hi = x_lo + 1;

  const double left = 80, right = 180, top = 40, bottom = 60;
  const double pw = opt.width - left - right, ph = opt.height - top - bottom;
  auto px = [&](double x) { return left + pw * (x - x_lo) / (x_hi - x_lo); };
  auto py = [&](double y) {
    return top + ph * (1.0 - (std::log10(y + shift) - ly_lo) / (ly_hi - ly_lo));
  };

  std::string svg;
  svg += fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      opt.width, opt.height, opt.width, opt.height);
  svg += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", opt.width, opt.height);
  if (!opt.title.empty()) {
    svg += fmt::format("<text x=\"{:.2f}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                       left + pw / 2, escape(opt.title));
  }
  svg += fmt::format(
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      left, top, pw, ph);

  // y: one tick per decade
  for (double d = ly_lo; d <= ly_hi + 1e-9; d += 1) {
    const double y = top + ph * (1.0 - (d - ly_lo) / (ly_hi - ly_lo));
    svg += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n", left,
        y, left + pw, y);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">1e{}</text>\n",
                       left - 6, y + 4, static_cast<int>(d));
  }
  // x: five evenly spaced ticks
  for (int k = 0; k <= 4; ++k) {
    const double xv = x_lo + (x_hi - x_lo) * k / 4.0;
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", px(xv),
                       top + ph + 18, fmt::format("{:.6g}", xv));
  }
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                     left + pw / 2, top + ph + 42, escape(opt.x_label));
  svg += fmt::format(
      "<text x=\"18\" y=\"{:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2f})\">{} "
      "(log10)</text>\n",
      top + ph / 2, top + ph / 2, escape(y_label));

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    const std::size_t n = s.x.size();
    const std::size_t keep = std::max<std::size_t>(2, opt.max_points);
    std::string pts;
    auto add = [&](std::size_t i) {
      if (!pts.empty()) pts += ' ';
      pts += fmt::format("{:.2f},{:.2f}", px(s.x[i]), py(s.y[i]));
    };
    if (n <= keep) {
      for (std::size_t i = 0; i < n; ++i) add(i);
    } else {
      for (std::size_t j = 0; j < keep; ++j) add(j * (n - 1) / (keep - 1));
    }
    svg += fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"><title>{}</title>"
        "</polyline>\n",
        color, pts, escape(s.name));
    const double ly = top + 16 + 20.0 * static_cast<double>(k);
    svg += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" "
        "stroke-width=\"3\"/>\n",
        left + pw + 12, ly, left + pw + 36, ly, color);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", left + pw + 42, ly + 4,
                       escape(s.name));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace fastbelief::report
