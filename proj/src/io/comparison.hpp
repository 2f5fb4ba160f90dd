#pragma once

#include <optional>
#include <string>
#include <vector>

namespace copsurv::io {

inline constexpr const char* kComparisonHeader =
    "Model,Response,Mean_Residual,SD_Residual,Mean_ARL,SD_ARL";

struct ComparisonRow {
  std::string model;
  std::string response;
  double mean_residual = 0.0;
  double sd_residual = 0.0;
  std::optional<double> mean_arl;
  std::optional<double> sd_arl;
};

// Reals with 4 decimals; undefined values spelled NA.
void write_table_csv(const std::vector<ComparisonRow>& rows, const std::string& path);
std::string format_table_csv(const std::vector<ComparisonRow>& rows);
std::vector<ComparisonRow> read_table_csv(const std::string& path);

}  // namespace copsurv::io
