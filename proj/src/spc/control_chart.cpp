#include "spc/control_chart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "io/csv.hpp"

namespace copsurv::spc {

std::size_t ControlChartReport::signal_count() const {
  return static_cast<std::size_t>(std::count(signals.begin(), signals.end(), true));
}

std::vector<double> compute_residuals(std::span<const double> actual,
                                      std::span<const double> predicted) {
  if (actual.size() != predicted.size()) {
    throw std::invalid_argument("compute_residuals: length mismatch");
  }
  if (actual.empty()) throw std::invalid_argument("compute_residuals: empty series");
  std::vector<double> r(actual.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = actual[i] - predicted[i];
  return r;
}

Limits shewhart_limits(std::span<const double> residuals, double k) {
  if (residuals.size() < 2) throw std::invalid_argument("shewhart_limits: need >= 2 residuals");
  if (!(k > 0.0)) throw std::invalid_argument("shewhart_limits: k must be > 0");
  double n = static_cast<double>(residuals.size());
  double mean = 0.0;
  for (double r : residuals) mean += r;
  mean /= n;
  double ss = 0.0;
  for (double r : residuals) ss += (r - mean) * (r - mean);
  Limits l;
  l.center = mean;
  l.sigma = std::sqrt(ss / (n - 1.0));
  l.ucl = mean + k * l.sigma;
  l.lcl = mean - k * l.sigma;
  return l;
}

ControlChartReport detect_and_arl(std::span<const double> residuals, double k) {
  auto lim = shewhart_limits(residuals, k);
  ControlChartReport rep;
  rep.residuals.assign(residuals.begin(), residuals.end());
  rep.center = lim.center;
  rep.sigma = lim.sigma;
  rep.lcl = lim.lcl;
  rep.ucl = lim.ucl;
  rep.k_sigma = k;
  rep.signals.resize(residuals.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    bool s = residuals[i] > lim.ucl || residuals[i] < lim.lcl;
    rep.signals[i] = s;
    hits += s ? 1 : 0;
  }
  if (hits > 0) rep.arl = static_cast<double>(residuals.size()) / static_cast<double>(hits);
  return rep;
}

void write_chart_csv(const ControlChartReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "index,residual,center,lcl,ucl,signal\n";
  for (std::size_t i = 0; i < report.residuals.size(); ++i) {
    out << (i + 1) << ',' << io::format_exact(report.residuals[i]) << ','
        << io::format_exact(report.center) << ',' << io::format_exact(report.lcl) << ','
        << io::format_exact(report.ucl) << ',' << (report.signals[i] ? 1 : 0) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

ControlChartReport read_chart_csv(const std::string& path, double k) {
  auto t = io::read_csv(path);
  std::size_t ir = t.column("residual"), ic = t.column("center"), il = t.column("lcl"),
              iu = t.column("ucl"), is = t.column("signal");
  ControlChartReport rep;
  rep.k_sigma = k;
  std::size_t hits = 0;
  for (const auto& row : t.rows) {
    rep.residuals.push_back(io::parse_double(row[ir], path));
    rep.center = io::parse_double(row[ic], path);
    rep.lcl = io::parse_double(row[il], path);
    rep.ucl = io::parse_double(row[iu], path);
    bool s = io::parse_int(row[is], path) != 0;
    rep.signals.push_back(s);
    hits += s ? 1 : 0;
  }
  rep.sigma = (rep.ucl - rep.center) / k;
  if (hits > 0) rep.arl = static_cast<double>(rep.residuals.size()) / static_cast<double>(hits);
  return rep;
}

std::string render_svg(const ControlChartReport& report, const std::string& title) {
  const double width = 800, height = 320, pad = 40;
  std::size_t n = report.residuals.size();
  double lo = std::min(report.lcl, *std::min_element(report.residuals.begin(), report.residuals.end()));
  double hi = std::max(report.ucl, *std::max_element(report.residuals.begin(), report.residuals.end()));
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  auto sx = [&](std::size_t i) {
    return pad + (n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.5) *
                     (width - 2 * pad);
  };
  auto sy = [&](double v) { return height - pad - (v - lo) / (hi - lo) * (height - 2 * pad); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << pad << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << title
     << "</text>\n";
  auto hline = [&](double v, const char* color, const char* dash) {
    os << "<line x1=\"" << pad << "\" x2=\"" << width - pad << "\" y1=\"" << sy(v) << "\" y2=\""
       << sy(v) << "\" stroke=\"" << color << "\" stroke-dasharray=\"" << dash << "\"/>\n";
  };
  hline(report.center, "green", "none");
  hline(report.ucl, "red", "6,4");
  hline(report.lcl, "red", "6,4");
  os << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
  for (std::size_t i = 0; i < n; ++i) os << sx(i) << ',' << sy(report.residuals[i]) << ' ';
  os << "\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    if (report.signals[i]) {
      os << "<circle cx=\"" << sx(i) << "\" cy=\"" << sy(report.residuals[i])
         << "\" r=\"3\" fill=\"red\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

void write_chart_svg(const ControlChartReport& report, const std::string& title,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << render_svg(report, title);
}

}  // namespace copsurv::spc
