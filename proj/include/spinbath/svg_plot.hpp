// svg_plot.hpp - minimal self-contained SVG line plots (no plotting library).
#pragma once

#include <string>
#include <vector>

namespace spinbath {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
  std::vector<std::string> metadata;  // emitted as XML comments
};

// 800x600 line plot: one polyline plus one circle marker per plottable point,
// decade ticks on log axes, "nice" ticks on linear ones. Points that are
// non-finite (or non-positive on a log axis) are skipped.
std::string render_svg(const PlotSpec& spec);

void write_svg(const std::string& path, const PlotSpec& spec);

}  // namespace spinbath
