// svg_plot.cpp - hand-rolled SVG renderer for log/linear line plots.
#include "spinbath/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 78.0;
constexpr double kRight = 24.0;
constexpr double kTop = 46.0;
constexpr double kBottom = 58.0;

const char* kPalette[] = {"#1b6ca8", "#c0392b", "#27ae60",
                          "#8e44ad", "#d68910", "#16a085"};
constexpr int kPaletteSize = 6;

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

bool usable(double v, bool log_axis) {
  return std::isfinite(v) && (!log_axis || v > 0.0);
}

struct AxisRange {
  double lo = 0.0, hi = 1.0;  // in plot coordinates (log10 when logarithmic)
  bool log = false;

  double to_unit(double v) const {
    const double p = log ? std::log10(v) : v;
    return (p - lo) / (hi - lo);
  }
};

AxisRange make_range(const PlotSpec& spec, bool y_axis, bool log_axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : spec.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (!usable(s.x[k], spec.log_x) || !usable(s.y[k], spec.log_y)) continue;
      const double v = y_axis ? s.y[k] : s.x[k];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  AxisRange r;
  r.log = log_axis;
  if (!(lo <= hi)) {  // nothing plottable: keep a unit box
    r.lo = log_axis ? 0.0 : 0.0;
    r.hi = log_axis ? 1.0 : 1.0;
    return r;
  }
  if (log_axis) {
    lo = std::log10(lo);
    hi = std::log10(hi);
  }
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  r.lo = lo - pad;
  r.hi = hi + pad;
  return r;
}

// Tick positions in data space (log axes: decades within range).
std::vector<double> make_ticks(const AxisRange& r) {
  std::vector<double> ticks;
  if (r.log) {
    const int d0 = static_cast<int>(std::ceil(r.lo - 1e-9));
    const int d1 = static_cast<int>(std::floor(r.hi + 1e-9));
    for (int d = d0; d <= d1; ++d) ticks.push_back(std::pow(10.0, d));
    if (ticks.size() >= 2) return ticks;
    ticks.clear();
    // span under a decade: three evenly spaced ticks in log position
    for (int k = 0; k < 3; ++k)
      ticks.push_back(std::pow(10.0, r.lo + (r.hi - r.lo) * (0.1 + 0.4 * k)));
    return ticks;
  }
  const double span = r.hi - r.lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= mult * mag) {
      step = mult * mag;
      break;
    }
  }
  const double first = std::ceil(r.lo / step) * step;
  for (double v = first; v <= r.hi + 1e-9 * span; v += step) ticks.push_back(v);
  return ticks;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  const AxisRange xr = make_range(spec, false, spec.log_x);
  const AxisRange yr = make_range(spec, true, spec.log_y);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + pw * xr.to_unit(v); };
  auto py = [&](double v) { return kTop + ph * (1.0 - yr.to_unit(v)); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
      << "\">\n";
  for (const auto& line : spec.metadata) {
    std::string safe = line;
    std::size_t pos;  // "--" is not allowed inside XML comments
    while ((pos = safe.find("--")) != std::string::npos) safe.replace(pos, 2, "- -");
    svg << "<!-- " << safe << " -->\n";
  }
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"#ffffff\"/>\n";
  svg << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
      << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  for (double t : make_ticks(xr)) {
    const double x = px(t);
    if (x < kLeft - 0.5 || x > kLeft + pw + 0.5) continue;
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(kTop + ph)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + ph + 18.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
        << xml_escape(tick_label(t)) << "</text>\n";
  }
  for (double t : make_ticks(yr)) {
    const double y = py(t);
    if (y < kTop - 0.5 || y > kTop + ph + 0.5) continue;
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(kLeft + pw) << "\" y2=\"" << num(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << num(kLeft - 8.0) << "\" y=\"" << num(y + 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
        << xml_escape(tick_label(t)) << "</text>\n";
  }

  int color_idx = 0;
  for (const auto& s : spec.series) {
    const char* color = kPalette[color_idx % kPaletteSize];
    ++color_idx;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    std::ostringstream pts;
    std::ostringstream markers;
    bool open = false;
    std::vector<std::string> segments;
    for (std::size_t k = 0; k < n; ++k) {
      if (!usable(s.x[k], spec.log_x) || !usable(s.y[k], spec.log_y)) {
        if (open) {
          segments.push_back(pts.str());
          pts.str("");
          open = false;
        }
        continue;
      }
      const double x = px(s.x[k]);
      const double y = py(s.y[k]);
      if (open) pts << " ";
      pts << num(x) << "," << num(y);
      open = true;
      markers << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y)
              << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    if (open) segments.push_back(pts.str());
    for (const auto& seg : segments) {
      if (seg.find(' ') == std::string::npos && seg.find(',') == std::string::npos)
        continue;  // single point: the marker already shows it
      svg << "<polyline points=\"" << seg << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n";
    }
    svg << markers.str();
  }

  double legend_y = kTop + 16.0;
  color_idx = 0;
  for (const auto& s : spec.series) {
    const char* color = kPalette[color_idx % kPaletteSize];
    ++color_idx;
    if (s.label.empty()) continue;
    const double lx = kLeft + pw - 150.0;
    svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(legend_y - 4.0) << "\" x2=\""
        << num(lx + 24.0) << "\" y2=\"" << num(legend_y - 4.0) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << num(lx + 30.0) << "\" y=\"" << num(legend_y)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.label)
        << "</text>\n";
    legend_y += 18.0;
  }

  svg << "<text x=\"" << num(kWidth / 2.0) << "\" y=\"" << num(kTop - 16.0)
      << "\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">"
      << xml_escape(spec.title) << "</text>\n";
  svg << "<text x=\"" << num(kLeft + pw / 2.0) << "\" y=\"" << num(kHeight - 14.0)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
      << xml_escape(spec.x_label) << "</text>\n";
  svg << "<text x=\"20\" y=\"" << num(kTop + ph / 2.0)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 20 " << num(kTop + ph / 2.0) << ")\">"
      << xml_escape(spec.y_label) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_svg(const std::string& path, const PlotSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << render_svg(spec);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace spinbath
