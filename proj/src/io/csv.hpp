#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace copsurv::io {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws when absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

// Comma-delimited with optional double-quoted fields; header row required.
// Rows whose field count differs from the header are rejected.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::istream& in, const std::string& source = "<stream>");

std::vector<std::string> split_csv_line(std::string_view line);

// Shortest text that reads back to the same double.
std::string format_exact(double v);
std::string format_fixed(double v, int decimals);
double parse_double(std::string_view s, std::string_view context);
long parse_int(std::string_view s, std::string_view context);

}  // namespace copsurv::io
