#pragma once

#include <string>
#include <vector>

namespace fpp::plot {

struct Series {
  std::string label;
  std::string color = "#1f6fb2";
  bool draw_line = true;
  bool draw_markers = true;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::string note;  // rendered inside the plot area when non-empty
  std::vector<Series> series;
};

// Self-contained SVG line plot; no runtime plotting dependency.  Points with
// non-positive coordinates are dropped on logarithmic axes.
std::string render_svg(const PlotSpec& spec);

}  // namespace fpp::plot
