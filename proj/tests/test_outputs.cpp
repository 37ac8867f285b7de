// test_outputs.cpp - CSV round trips, the shortest round-trip double format,
// and the SVG renderer's structural guarantees.
#include "doctest.h"
#include "spinbath/csv_io.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/svg_plot.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

using namespace spinbath;

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("spinbath_outputs_" + name);
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("format_double round-trips exactly through strtod") {
  const double values[] = {0.0,
                           1.0,
                           -1.0,
                           0.1,
                           1.0 / 3.0,
                           6.02214076e23,
                           9.2740100783e-24,
                           -2.5e-308,
                           1.7976931348623157e308,
                           5e-324,
                           std::nextafter(1.0, 2.0)};
  for (double v : values) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.1");  // shortest form, not 17 digits
  CHECK(std::isnan(std::strtod(format_double(std::nan("")).c_str(), nullptr)));
  CHECK(std::strtod(format_double(std::numeric_limits<double>::infinity()).c_str(),
                    nullptr) == std::numeric_limits<double>::infinity());
}

TEST_CASE("csv write and read preserve values, header, and metadata") {
  const auto path = temp_file("roundtrip.csv");
  const std::vector<std::vector<double>> data = {
      {1.0, 0.1, -3.5e-7}, {2.0, 1.0 / 3.0, 6.02e23}};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : data) {
    std::vector<std::string> row;
    for (double v : r) row.push_back(format_double(v));
    rows.push_back(row);
  }
  write_csv(path.string(), {"tool: test", "seed: 5"}, {"a", "b", "c"}, rows);

  const auto table = read_csv(path.string());
  REQUIRE(table.header.size() == 3);
  CHECK(table.header[1] == "b");
  REQUIRE(table.rows.size() == 2);
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t j = 0; j < data[i].size(); ++j)
      CHECK(table.rows[i][j] == data[i][j]);
  REQUIRE(table.comments.size() == 2);
  CHECK(table.comments[0] == "tool: test");
  CHECK(table.line_numbers[0] > 0);
  fs::remove(path);
}

TEST_CASE("csv reader reports malformed content with line context") {
  const auto path = temp_file("bad.csv");
  {
    std::ofstream out(path);
    out << "a,b\n1,2\n3,oops\n";
  }
  try {
    read_csv(path.string());
    FAIL("expected IoError");
  } catch (const IoError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(":3") != std::string::npos);
  }
  {
    std::ofstream out(path);
    out << "a,b\n1,2,3\n";  // ragged row
  }
  CHECK_THROWS_AS(read_csv(path.string()), IoError);
  fs::remove(path);
  CHECK_THROWS_AS(read_csv(path.string()), IoError);  // missing file
}

TEST_CASE("svg renderer emits one marker per plottable point") {
  PlotSpec spec;
  spec.title = "demo";
  spec.x_label = "B (T)";
  spec.y_label = "T1 (s)";
  spec.series.push_back({"s1", {1.0, 2.0, 3.0, 4.0}, {1.0, 0.5, 0.25, 0.125}});
  spec.series.push_back({"s2", {1.0, 2.0}, {3.0, 2.0}});
  const std::string svg = render_svg(spec);
  CHECK(count_occurrences(svg, "<circle") == 6);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.rfind("</svg>") != std::string::npos);
  CHECK(svg.find("demo") != std::string::npos);
  CHECK(svg.find("B (T)") != std::string::npos);
}

TEST_CASE("log axes drop non-positive and non-finite points") {
  PlotSpec spec;
  spec.log_x = true;
  spec.log_y = true;
  spec.series.push_back(
      {"s", {0.1, 1.0, 10.0, -5.0, 100.0}, {1.0, 0.0, 4.0, 2.0, std::nan("")}});
  // plottable: (0.1, 1) and (10, 4) only
  const std::string svg = render_svg(spec);
  CHECK(count_occurrences(svg, "<circle") == 2);
}

TEST_CASE("svg output escapes markup and keeps comments well formed") {
  PlotSpec spec;
  spec.title = "a < b & \"c\"";
  spec.metadata = {"config: x -- y"};
  spec.series.push_back({"<series>", {1.0}, {1.0}});
  const std::string svg = render_svg(spec);
  CHECK(svg.find("a &lt; b &amp; &quot;c&quot;") != std::string::npos);
  CHECK(svg.find("<series>") == std::string::npos);
  CHECK(svg.find("&lt;series&gt;") != std::string::npos);
  // "--" is illegal inside XML comments
  CHECK(svg.find("x -- y") == std::string::npos);
  CHECK(svg.find("<!--") != std::string::npos);
}

TEST_CASE("svg renderer copes with nothing to plot") {
  PlotSpec spec;
  spec.log_y = true;
  spec.series.push_back({"s", {1.0, 2.0}, {-1.0, -2.0}});
  const std::string svg = render_svg(spec);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(count_occurrences(svg, "<circle") == 0);
}

TEST_CASE("write_svg creates the file and fails loudly on bad paths") {
  PlotSpec spec;
  spec.series.push_back({"s", {1.0, 2.0}, {1.0, 2.0}});
  const auto path = temp_file("plot.svg");
  write_svg(path.string(), spec);
  CHECK(fs::file_size(path) > 100);
  fs::remove(path);
  CHECK_THROWS_AS(write_svg("/nonexistent/dir/plot.svg", spec), IoError);
}
