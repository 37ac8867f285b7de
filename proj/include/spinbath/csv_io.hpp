// csv_io.hpp - minimal CSV reading/writing with '#' metadata lines.
#pragma once

#include <string>
#include <vector>

namespace spinbath {

struct CsvTable {
  std::vector<std::string> header;            // column names from the first data line
  std::vector<std::vector<double>> rows;      // numeric cells, row major
  std::vector<int> line_numbers;              // 1-based source line of each row
  std::vector<std::string> comments;          // '#' lines, prefix stripped
};

// Reads a numeric CSV. Throws IoError on missing files, ragged rows or cells
// that do not parse as numbers; "nan"/"inf" parse to their IEEE values and are
// left for the caller to judge.
CsvTable read_csv(const std::string& path);

// Writes '#'-prefixed metadata lines, one header line, then string rows.
void write_csv(const std::string& path, const std::vector<std::string>& metadata,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace spinbath
