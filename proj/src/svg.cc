//
// Copyright 2026 The dpepi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpepi/svg.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace dpepi::svg {
namespace {

constexpr int kCell = 60;
constexpr int kColumns = 5;
constexpr int kWidth = 720;
constexpr int kHeight = 360;
constexpr int kMargin = 40;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#ff7f0e", "#9467bd", "#8c564b"};

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string Heatmap(const std::map<std::string, long long>& counts,
                    const std::string& title) {
  long long max_count = 0;
  for (const auto& [code, n] : counts) max_count = std::max(max_count, n);
  const int rows =
      (static_cast<int>(counts.size()) + kColumns - 1) / kColumns;
  const int width = kColumns * kCell + 2 * 10;
  const int height = rows * kCell + 40;
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n"
      "<text x=\"10\" y=\"20\" font-size=\"14\">{}</text>\n",
      width, height, Escape(title));
  int i = 0;
  for (const auto& [code, n] : counts) {
    const double f =
        max_count > 0 ? static_cast<double>(n) / static_cast<double>(max_count) : 0.0;
    const int shade = static_cast<int>(std::lround(255 * (1 - f)));
    const int x = 10 + (i % kColumns) * kCell;
    const int y = 30 + (i / kColumns) * kCell;
    out += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" "
        "fill=\"rgb(255,{},{})\" stroke=\"#999\"><title>{}: {}</title></rect>\n"
        "<text x=\"{}\" y=\"{}\" font-size=\"9\">{}</text>\n",
        x, y, kCell, kCell, shade, shade, Escape(code), n, x + 3, y + 12,
        Escape(code));
    ++i;
  }
  out += "</svg>\n";
  return out;
}

std::string LineChart(const std::vector<Date>& dates,
                      const std::vector<Line>& lines, const std::string& title) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& line : lines) {
    for (double v : line.values) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!(hi >= lo)) lo = 0, hi = 1;
  if (hi == lo) hi = lo + 1;
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  const std::size_t n = dates.size();
  auto px = [&](std::size_t i) {
    return kMargin + (n > 1 ? plot_w * static_cast<double>(i) / double(n - 1) : 0.0);
  };
  auto py = [&](double v) { return kMargin + plot_h * (hi - v) / (hi - lo); };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n"
      "<text x=\"{}\" y=\"20\" font-size=\"14\">{}</text>\n"
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
      "stroke=\"#333\"/>\n"
      "<text x=\"2\" y=\"{}\" font-size=\"10\">{:.4g}</text>\n"
      "<text x=\"2\" y=\"{}\" font-size=\"10\">{:.4g}</text>\n",
      kWidth, kHeight, kMargin, Escape(title), kMargin, kMargin, plot_w, plot_h,
      kMargin + 4, hi, kMargin + plot_h, lo);
  if (n > 0) {
    out += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-size=\"10\">{}</text>\n"
        "<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{}</text>\n",
        kMargin, kHeight - kMargin + 14, dates.front().ToString(),
        kMargin + plot_w, kHeight - kMargin + 14, dates.back().ToString());
  }
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const char* color = kPalette[l % std::size(kPalette)];
    std::string path;
    bool pen_down = false;
    for (std::size_t i = 0; i < std::min(n, lines[l].values.size()); ++i) {
      const double v = lines[l].values[i];
      if (!std::isfinite(v)) {
        pen_down = false;
        continue;
      }
      path += fmt::format("{}{:.2f},{:.2f} ", pen_down ? "L" : "M", px(i), py(v));
      pen_down = true;
    }
    out += fmt::format(
        "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n"
        "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{}\">{}</text>\n",
        path, color, kWidth - kMargin + 4 - 120, kMargin + 14 + 14 * l, color,
        Escape(lines[l].label));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace dpepi::svg
