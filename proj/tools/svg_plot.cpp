#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace fpp::plot {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 30, kTop = 48, kBottom = 64;

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool ok() const { return lo <= hi; }
};

std::vector<double> ticks(double lo, double hi, bool log_scale) {
  std::vector<double> out;
  if (log_scale) {
    int e0 = static_cast<int>(std::floor(lo));
    int e1 = static_cast<int>(std::ceil(hi));
    for (int e = e0; e <= e1; ++e) out.push_back(static_cast<double>(e));
    return out;
  }
  const double span = hi - lo;
  if (span <= 0) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + 1e-12 * span; t += step) out.push_back(t);
  return out;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };

  Range rx, ry;
  for (const auto& s : spec.series) {
    for (auto [x, y] : s.points) {
      if (spec.log_x && x <= 0.0) continue;
      if (spec.log_y && y <= 0.0) continue;
      rx.add(tx(x));
      ry.add(ty(y));
    }
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << spec.title << "</text>\n";

  if (!rx.ok() || !ry.ok()) {
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\" fill=\"#a33\">"
        << (spec.note.empty() ? "no plottable data" : spec.note)
        << "</text>\n</svg>\n";
    return svg.str();
  }
  if (rx.lo == rx.hi) {
    rx.lo -= 0.5;
    rx.hi += 0.5;
  }
  if (ry.lo == ry.hi) {
    ry.lo -= 0.5;
    ry.hi += 0.5;
  }

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (tx(v) - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double v) { return kTop + ph - (ty(v) - ry.lo) / (ry.hi - ry.lo) * ph; };

  // frame
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (double t : ticks(rx.lo, rx.hi, spec.log_x)) {
    const double x = kLeft + (t - rx.lo) / (rx.hi - rx.lo) * pw;
    if (x < kLeft - 0.5 || x > kLeft + pw + 0.5) continue;
    svg << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x
        << "\" y2=\"" << kTop + ph << "\" stroke=\"#ddd\"/>\n";
    const double label = spec.log_x ? std::pow(10.0, t) : t;
    svg << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(label) << "</text>\n";
  }
  for (double t : ticks(ry.lo, ry.hi, spec.log_y)) {
    const double y = kTop + ph - (t - ry.lo) / (ry.hi - ry.lo) * ph;
    if (y < kTop - 0.5 || y > kTop + ph + 0.5) continue;
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\""
        << kLeft + pw << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
    const double label = spec.log_y ? std::pow(10.0, t) : t;
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(label) << "</text>\n";
  }

  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << spec.x_label << "</text>\n";
  svg << "<text x=\"20\" y=\"" << kTop + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 20 "
      << kTop + ph / 2 << ")\">" << spec.y_label << "</text>\n";

  double legend_y = kTop + 14;
  for (const auto& s : spec.series) {
    std::vector<std::pair<double, double>> pts;
    for (auto [x, y] : s.points) {
      if (spec.log_x && x <= 0.0) continue;
      if (spec.log_y && y <= 0.0) continue;
      pts.emplace_back(x, y);
    }
    if (s.draw_line && pts.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.6\" points=\"";
      for (auto [x, y] : pts) svg << px(x) << "," << py(y) << " ";
      svg << "\"/>\n";
    }
    if (s.draw_markers) {
      for (auto [x, y] : pts)
        svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
            << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }
    svg << "<rect x=\"" << kLeft + pw - 180 << "\" y=\"" << legend_y - 9
        << "\" width=\"12\" height=\"4\" fill=\"" << s.color << "\"/>\n";
    svg << "<text x=\"" << kLeft + pw - 162 << "\" y=\"" << legend_y
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
        << "</text>\n";
    legend_y += 16;
  }

  if (!spec.note.empty())
    svg << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + ph - 10
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#a33\">"
        << spec.note << "</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace fpp::plot
