#include "io/comparison.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "io/csv.hpp"

namespace copsurv::io {

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_fixed(*v, 4) : "NA"; }

std::optional<double> parse_cell(const std::string& s, const std::string& path) {
  if (s == "NA") return std::nullopt;
  return parse_double(s, path);
}

}  // namespace

std::string format_table_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << kComparisonHeader << '\n';
  for (const auto& r : rows) {
    os << r.model << ',' << r.response << ',' << format_fixed(r.mean_residual, 4) << ','
       << format_fixed(r.sd_residual, 4) << ',' << cell(r.mean_arl) << ',' << cell(r.sd_arl)
       << '\n';
  }
  return os.str();
}

void write_table_csv(const std::vector<ComparisonRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << format_table_csv(rows);
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<ComparisonRow> read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string first;
  std::getline(in, first);
  if (!first.empty() && first.back() == '\r') first.pop_back();
  if (first != kComparisonHeader) throw std::invalid_argument(path + ": unexpected header");
  in.seekg(0);
  auto t = parse_csv(in, path);
  std::vector<ComparisonRow> rows;
  for (const auto& f : t.rows) {
    ComparisonRow r;
    r.model = f[0];
    r.response = f[1];
    r.mean_residual = parse_double(f[2], path);
    r.sd_residual = parse_double(f[3], path);
    r.mean_arl = parse_cell(f[4], path);
    r.sd_arl = parse_cell(f[5], path);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace copsurv::io
