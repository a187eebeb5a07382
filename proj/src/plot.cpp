#include "rbcsp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <locale>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rbcsp/instance_io.hpp"

namespace rbcsp {

namespace {

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

// Fixed two-decimal coordinates keep the output byte-stable.
std::string coord(double x) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.setf(std::ios::fixed);
  s.precision(2);
  s << x;
  return s.str();
}

std::string tick_label(double x) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(3);
  s << x;
  return s.str();
}

}  // namespace

std::string render_svg(std::span<const SweepRow> rows, const PlotOptions& options) {
  std::vector<SweepRow> pts;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(pts),
               [](const SweepRow& r) { return std::isfinite(r.value) && std::isfinite(r.r); });
  if (pts.empty()) throw std::invalid_argument("render_svg: no finite rows to plot");

  const double left = 60, right = 20, top = 40, bottom = 50;
  const double pw = options.width - left - right, ph = options.height - top - bottom;

  double x_lo = pts.front().r, x_hi = pts.front().r, y_lo = 0, y_hi = 1;
  for (const auto& p : pts) {
    x_lo = std::min(x_lo, p.r);
    x_hi = std::max(x_hi, p.r);
    y_lo = std::min(y_lo, p.value);
    y_hi = std::max(y_hi, p.value);
  }
  if (options.threshold) {
    x_lo = std::min(x_lo, *options.threshold);
    x_hi = std::max(x_hi, *options.threshold);
  }
  if (x_hi == x_lo) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
      << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty())
    svg << "<text x=\"" << coord(options.width / 2.0) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(options.title) << "</text>\n";

  // Axes.
  svg << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(top + ph) << "\" x2=\"" << coord(left + pw) << "\" y2=\""
      << coord(top + ph) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(top) << "\" x2=\"" << coord(left) << "\" y2=\""
      << coord(top + ph) << "\" stroke=\"black\"/>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / kTicks, yv = y_lo + (y_hi - y_lo) * i / kTicks;
    svg << "<line class=\"xtick\" x1=\"" << coord(sx(xv)) << "\" y1=\"" << coord(top + ph) << "\" x2=\""
        << coord(sx(xv)) << "\" y2=\"" << coord(top + ph + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << coord(sx(xv)) << "\" y=\"" << coord(top + ph + 18)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << tick_label(xv) << "</text>\n";
    svg << "<line class=\"ytick\" x1=\"" << coord(left - 5) << "\" y1=\"" << coord(sy(yv)) << "\" x2=\""
        << coord(left) << "\" y2=\"" << coord(sy(yv)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << coord(left - 8) << "\" y=\"" << coord(sy(yv) + 3)
        << "\" text-anchor=\"end\" font-size=\"10\">" << tick_label(yv) << "</text>\n";
  }
  svg << "<text x=\"" << coord(left + pw / 2) << "\" y=\"" << coord(options.height - 10.0)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(options.x_label) << "</text>\n";
  svg << "<text x=\"15\" y=\"" << coord(top + ph / 2) << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 15 "
      << coord(top + ph / 2) << ")\">" << escape(options.y_label) << "</text>\n";

  if (options.threshold) {
    const double x = sx(*options.threshold);
    svg << "<line class=\"threshold\" data-r=\"" << format_real(*options.threshold) << "\" x1=\"" << coord(x)
        << "\" y1=\"" << coord(top) << "\" x2=\"" << coord(x) << "\" y2=\"" << coord(top + ph)
        << "\" stroke=\"red\" stroke-dasharray=\"4 3\"/>\n";
    if (!options.threshold_label.empty())
      svg << "<text x=\"" << coord(x + 4) << "\" y=\"" << coord(top + 12) << "\" font-size=\"10\" fill=\"red\">"
          << escape(options.threshold_label) << "</text>\n";
  }

  svg << "<polyline class=\"series\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i)
    svg << (i ? " " : "") << coord(sx(pts[i].r)) << ',' << coord(sy(pts[i].value));
  svg << "\"/>\n";
  for (const auto& p : pts)
    svg << "<circle cx=\"" << coord(sx(p.r)) << "\" cy=\"" << coord(sy(p.value)) << "\" r=\"3\" fill=\"steelblue\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace rbcsp
