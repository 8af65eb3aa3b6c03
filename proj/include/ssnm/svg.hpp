#pragma once

/** @file
 * Standalone SVG 1.1 line charts of result tables (x: SNR in dB).
 * Output bytes depend only on the table and the style.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ssnm/table.hpp"

namespace ssnm {

struct SvgStyle {
  std::string title;
  std::string y_label = "MSE / sigma^2";
  bool log_y = false;
  int width = 720;
  int height = 480;
};

namespace svg_detail {

inline constexpr std::array<const char*, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

inline std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
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

// Roughly five ticks at 1/2/5 x 10^k spacing.
inline std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return ticks;
}

}  // namespace svg_detail

inline std::string to_svg(const ResultTable& table, const SvgStyle& style = {}) {
  using namespace svg_detail;
  table.validate();
  if (table.rows() < 2) throw InvalidArgument("a line chart needs at least two rows");

  const double left = 70, right = 150, top = 40, bottom = 55;
  const double pw = style.width - left - right, ph = style.height - top - bottom;

  auto ymap = [&](double v) { return style.log_y ? std::log10(v) : v; };
  double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
  for (const auto& s : table.series)
    for (double v : s.values) {
      if (style.log_y && !(v > 0.0))
        throw InvalidArgument("log-scale chart needs positive values in '" + s.name + "'");
      ylo = std::min(ylo, ymap(v));
      yhi = std::max(yhi, ymap(v));
    }
  if (!(yhi > ylo)) {
    ylo -= 0.5;
    yhi += 0.5;
  }
  const double pad = 0.05 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;
  const double xlo = table.snr_db.front(), xhi = table.snr_db.back();
  const double xspan = xhi > xlo ? xhi - xlo : 1.0;

  auto px = [&](double x) { return left + (x - xlo) / xspan * pw; };
  auto py = [&](double y) { return top + (yhi - ymap(y)) / (yhi - ylo) * ph; };
  auto py_raw = [&](double t) { return top + (yhi - t) / (yhi - ylo) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width
    << "\" height=\"" << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height
    << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height
    << "\" fill=\"white\"/>\n";
  if (!style.title.empty())
    o << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << escape(style.title) << "</text>\n";

  // Axes and ticks.
  o << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
    << "<line class=\"axis x-axis\" x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + ph)
    << "\" x2=\"" << fixed(left + pw) << "\" y2=\"" << fixed(top + ph) << "\"/>\n"
    << "<line class=\"axis y-axis\" x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\""
    << fixed(left) << "\" y2=\"" << fixed(top + ph) << "\"/>\n</g>\n";
  o << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : nice_ticks(xlo, xhi)) {
    o << "<line x1=\"" << fixed(px(t)) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(px(t))
      << "\" y2=\"" << fixed(top + ph + 5) << "\" stroke=\"black\"/>"
      << "<text x=\"" << fixed(px(t)) << "\" y=\"" << fixed(top + ph + 18)
      << "\" text-anchor=\"middle\">" << format_number(t, 6) << "</text>\n";
  }
  for (double t : nice_ticks(ylo, yhi)) {
    const std::string label = format_number(style.log_y ? std::pow(10.0, t) : t, 6);
    o << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(py_raw(t)) << "\" x2=\""
      << fixed(left) << "\" y2=\"" << fixed(py_raw(t)) << "\" stroke=\"black\"/>"
      << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(py_raw(t) + 4)
      << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  o << "</g>\n";
  o << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << style.height - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">SNR (dB)</text>\n"
    << "<text x=\"16\" y=\"" << fixed(top + ph / 2) << "\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " << fixed(top + ph / 2)
    << ")\">" << escape(style.y_label) << (style.log_y ? " (log)" : "") << "</text>\n";

  // Series.
  for (std::size_t i = 0; i < table.series.size(); ++i) {
    const auto& s = table.series[i];
    o << "<polyline class=\"series\" data-name=\"" << escape(s.name) << "\" fill=\"none\" stroke=\""
      << kPalette[i % kPalette.size()] << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t r = 0; r < table.rows(); ++r)
      o << (r ? " " : "") << fixed(px(table.snr_db[r])) << ',' << fixed(py(s.values[r]));
    o << "\"/>\n";
  }

  // Legend.
  o << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < table.series.size(); ++i) {
    const double y = top + 10 + 20.0 * static_cast<double>(i);
    const double x = left + pw + 15;
    o << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(x + 24)
      << "\" y2=\"" << fixed(y) << "\" stroke=\"" << kPalette[i % kPalette.size()]
      << "\" stroke-width=\"2\"/><text x=\"" << fixed(x + 30) << "\" y=\"" << fixed(y + 4) << "\">"
      << escape(table.series[i].name) << "</text>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

inline void write_svg(const ResultTable& table, const SvgStyle& style,
                      const std::filesystem::path& path) {
  write_file_atomic(path, to_svg(table, style));
}

}  // namespace ssnm
