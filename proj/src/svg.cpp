// Copyright 2026 The pfclab Authors
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

#include "pfc/svg.hpp"

#include "pfc/csv.hpp"
#include "pfc/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace pfc::svg {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 55;
constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
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

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;
  double pixel_lo = 0, pixel_hi = 1;

  double map(double v) const {
    const double a = log ? std::log10(lo) : lo, b = log ? std::log10(hi) : hi;
    const double t = ((log ? std::log10(v) : v) - a) / (b - a);
    return pixel_lo + t * (pixel_hi - pixel_lo);
  }
};

Axis make_axis(std::vector<double> values, bool log, double p0, double p1) {
  Axis ax;
  ax.log = log;
  ax.pixel_lo = p0;
  ax.pixel_hi = p1;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (log && v <= 0)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) lo = log ? 1e-3 : 0, hi = 1;
  if (hi == lo) {
    if (log) lo /= 10, hi *= 10;
    else lo -= 0.5, hi += 0.5;
  }
  ax.lo = lo;
  ax.hi = hi;
  return ax;
}

std::vector<double> ticks(const Axis& ax) {
  std::vector<double> t;
  if (ax.log) {
    for (int e = static_cast<int>(std::floor(std::log10(ax.lo))); e <= std::ceil(std::log10(ax.hi)); ++e) {
      const double v = std::pow(10.0, e);
      if (v >= ax.lo * (1 - 1e-9) && v <= ax.hi * (1 + 1e-9)) t.push_back(v);
    }
    return t;
  }
  for (int i = 0; i <= 5; ++i) t.push_back(ax.lo + (ax.hi - ax.lo) * i / 5);
  return t;
}

void frame(std::ostringstream& o, const std::string& title, const std::string& xl, const std::string& yl,
           const Axis& x, const Axis& y) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << escape(title)
    << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight << "\" height=\""
    << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double v : ticks(x)) {
    const double px = x.map(v);
    o << "<line x1=\"" << px << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << px << "\" y2=\""
      << kHeight - kBottom + 4 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << px << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
      << format_number(std::round(v * 1e6) / 1e6) << "</text>\n";
  }
  for (double v : ticks(y)) {
    const double py = y.map(v);
    o << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << py << "\" x2=\"" << kLeft << "\" y2=\"" << py
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
      << format_number(y.log ? v : std::round(v * 1e6) / 1e6) << "</text>\n";
  }
  o << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
    << escape(xl) << "</text>\n";
  o << "<text transform=\"translate(16," << (kTop + kHeight - kBottom) / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(yl) << "</text>\n";
}

}  // namespace

std::string render(const LineChart& chart) {
  std::vector<double> xs, ys;
  for (const auto& s : chart.series) {
    if (s.x.size() != s.y.size()) fail(ErrorCode::kLengthMismatch, "svg series '" + s.name + "' has ragged data");
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  const Axis x = make_axis(xs, chart.log_x, kLeft, kWidth - kRight);
  const Axis y = make_axis(ys, chart.log_y, kHeight - kBottom, kTop);
  std::ostringstream o;
  o.precision(6);
  frame(o, chart.title, chart.x_label, chart.y_label, x, y);
  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const auto& s = chart.series[i];
    const char* colour = kPalette[i % kPalette.size()];
    o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\""
      << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.y[k]) || (chart.log_y && s.y[k] <= 0) || (chart.log_x && s.x[k] <= 0)) continue;
      o << x.map(s.x[k]) << "," << y.map(s.y[k]) << " ";
    }
    o << "\"/>\n";
    const double ly = kTop + 14 + 16 * static_cast<double>(i);
    o << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - kRight + 30 << "\" y2=\""
      << ly << "\" stroke=\"" << colour << "\"" << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
    o << "<text x=\"" << kWidth - kRight + 34 << "\" y=\"" << ly + 4 << "\">" << escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string render(const Heatmap& map) {
  if (map.z.rows() != static_cast<Eigen::Index>(map.y.size()) || map.z.cols() != static_cast<Eigen::Index>(map.x.size()))
    fail(ErrorCode::kLengthMismatch, "heatmap grid does not match its axes");
  if (map.x.empty() || map.y.empty()) fail(ErrorCode::kInvalidParams, "heatmap needs a non-empty grid");
  const Axis x = make_axis(map.x, false, kLeft, kWidth - kRight);
  const Axis y = make_axis(map.y, false, kHeight - kBottom, kTop);
  const double zmin = map.z.minCoeff(), zmax = map.z.maxCoeff();
  const bool diverging = zmin < 0 && zmax > 0;
  const double zabs = std::max(std::abs(zmin), std::abs(zmax));

  auto colour = [&](double v) {
    double r, g, b;
    if (diverging) {
      const double t = zabs > 0 ? v / zabs : 0;
      if (t >= 0) r = 1, g = b = 1 - t;
      else b = 1, r = g = 1 + t;
    } else {
      const double t = zmax > zmin ? (v - zmin) / (zmax - zmin) : 0;
      r = g = 1 - t;
      b = 1 - 0.5 * t;
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(255 * r)),
                  static_cast<int>(std::lround(255 * g)), static_cast<int>(std::lround(255 * b)));
    return std::string(buf);
  };

  std::ostringstream o;
  o.precision(6);
  frame(o, map.title, map.x_label, map.y_label, x, y);
  const double cw = (kWidth - kLeft - kRight) / static_cast<double>(map.x.size());
  const double ch = (kHeight - kTop - kBottom) / static_cast<double>(map.y.size());
  for (std::size_t i = 0; i < map.y.size(); ++i)
    for (std::size_t j = 0; j < map.x.size(); ++j)
      o << "<rect x=\"" << kLeft + cw * static_cast<double>(j) << "\" y=\""
        << kHeight - kBottom - ch * static_cast<double>(i + 1) << "\" width=\"" << cw + 0.5 << "\" height=\""
        << ch + 0.5 << "\" fill=\"" << colour(map.z(i, j)) << "\"/>\n";
  o << "<text x=\"" << kWidth - kRight + 10 << "\" y=\"" << kTop + 14 << "\">min " << format_number(zmin)
    << "</text>\n";
  o << "<text x=\"" << kWidth - kRight + 10 << "\" y=\"" << kTop + 30 << "\">max " << format_number(zmax)
    << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace pfc::svg
