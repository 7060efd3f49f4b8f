#pragma once

// Dependency-free SVG line charts for sweep CSVs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "stocon/error.hpp"
#include "stocon/report.hpp"

namespace stocon {

struct PlotOptions {
  std::string x_column;  // empty: first column whose values all parse as numbers
  std::string y_column = "mean_cost";
  std::vector<std::string> ignore{"std", "n_traces", "n_failures"};
  int width = 720;
  int height = 440;
};

namespace detail {

inline bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end && *end == '\0' && std::isfinite(out);
}

inline std::string svg_escape(const std::string& s) {
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

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

/// One polyline per distinct combination of the remaining columns.
inline std::string render_line_chart(const CsvTable& table, const PlotOptions& opt = {}) {
  std::string xcol = opt.x_column;
  if (xcol.empty()) {
    for (std::size_t c = 0; c < table.header.size() && xcol.empty(); ++c) {
      if (table.header[c] == opt.y_column) continue;
      bool numeric = !table.rows.empty();
      double v;
      for (const auto& r : table.rows) numeric = numeric && detail::parse_double(r[c], v);
      if (numeric) xcol = table.header[c];
    }
  }
  const auto xi = table.column(xcol);
  const auto yi = table.column(opt.y_column);
  if (!xi) throw DomainError("plot: no usable x column '" + xcol + "'");
  if (!yi) throw DomainError("plot: no column '" + opt.y_column + "'");

  std::vector<std::size_t> group_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c == *xi || c == *yi) continue;
    if (std::find(opt.ignore.begin(), opt.ignore.end(), table.header[c]) != opt.ignore.end()) continue;
    group_cols.push_back(c);
  }

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const auto& r : table.rows) {
    double x, y;
    if (!detail::parse_double(r[*xi], x) || !detail::parse_double(r[*yi], y)) continue;
    std::string key;
    for (auto c : group_cols) key += (key.empty() ? "" : " ") + table.header[c] + "=" + r[c];
    if (!series.count(key)) order.push_back(key);
    series[key].emplace_back(x, y);
  }
  if (series.empty()) throw DomainError("plot: no numeric points");

  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& [_, pts] : series)
    for (auto [x, y] : pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double left = 60, right = opt.width - 220.0, top = 20, bottom = opt.height - 50.0;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (right - left); };
  auto sy = [&](double y) { return bottom - (y - y0) / (y1 - y0) * (bottom - top); };

  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    svg << "<text x=\"" << detail::fmt(sx(xv)) << "\" y=\"" << bottom + 15 << "\" text-anchor=\"middle\">"
        << format_number(xv) << "</text>\n";
    svg << "<text x=\"" << left - 5 << "\" y=\"" << detail::fmt(sy(yv) + 4) << "\" text-anchor=\"end\">"
        << format_number(yv) << "</text>\n";
  }
  svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << opt.height - 10 << "\" text-anchor=\"middle\">"
      << detail::svg_escape(xcol) << "</text>\n";
  svg << "<text x=\"15\" y=\"" << (top + bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << (top + bottom) / 2 << ")\">" << detail::svg_escape(opt.y_column) << "</text>\n";

  for (std::size_t s = 0; s < order.size(); ++s) {
    auto pts = series[order[s]];
    std::stable_sort(pts.begin(), pts.end(), [](auto a, auto b) { return a.first < b.first; });
    const char* color = palette[s % 10];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : pts) svg << detail::fmt(sx(x)) << ',' << detail::fmt(sy(y)) << ' ';
    svg << "\"/>\n";
    for (auto [x, y] : pts)
      svg << "<circle cx=\"" << detail::fmt(sx(x)) << "\" cy=\"" << detail::fmt(sy(y)) << "\" r=\"2.5\" fill=\""
          << color << "\"/>\n";
    const double ly = top + 14.0 * static_cast<double>(s);
    svg << "<line x1=\"" << right + 10 << "\" y1=\"" << ly << "\" x2=\"" << right + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << right + 35 << "\" y=\"" << ly + 4 << "\">" << detail::svg_escape(order[s])
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace stocon
