#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace copsurv::spc {

struct Limits {
  double lcl = 0.0;
  double center = 0.0;
  double ucl = 0.0;
  double sigma = 0.0;
};

struct ControlChartReport {
  std::vector<double> residuals;
  double center = 0.0;
  double sigma = 0.0;  // sample SD, n - 1 denominator
  double lcl = 0.0;
  double ucl = 0.0;
  double k_sigma = 2.0;
  std::vector<bool> signals;
  std::optional<double> arl;  // n / #signals; empty when nothing signals

  std::size_t signal_count() const;
};

// R_t = actual_t - predicted_t.
std::vector<double> compute_residuals(std::span<const double> actual,
                                      std::span<const double> predicted);

// center +- k * sigma.
Limits shewhart_limits(std::span<const double> residuals, double k = 2.0);

// Strict exceedance: a point exactly on a limit is in control.
ControlChartReport detect_and_arl(std::span<const double> residuals, double k = 2.0);

// `index,residual,center,lcl,ucl,signal` with 1-based index.
void write_chart_csv(const ControlChartReport& report, const std::string& path);
ControlChartReport read_chart_csv(const std::string& path, double k = 2.0);

// Line plot of the series with center/limit lines and signal markers.
std::string render_svg(const ControlChartReport& report, const std::string& title);
void write_chart_svg(const ControlChartReport& report, const std::string& title,
                     const std::string& path);

}  // namespace copsurv::spc
