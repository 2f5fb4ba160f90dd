#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

#include "spc/control_chart.hpp"

using namespace copsurv::spc;

namespace {

const std::vector<double> kSpike{0, 0, 0, 0, 0, 0, 0, 0, 0, 10};

std::vector<double> normals(std::size_t n, std::uint64_t seed, double mu = 0.0, double sd = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(mu, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("residuals") {
  std::vector<double> a{3, 4}, p{1, 6};
  CHECK(compute_residuals(a, p) == std::vector<double>{2, -2});
  CHECK(compute_residuals(a, a) == std::vector<double>{0, 0});
  CHECK_THROWS_AS(compute_residuals(a, std::vector<double>{1}), std::invalid_argument);
  CHECK_THROWS_AS(compute_residuals(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);

  auto noise = normals(100000, 7);
  std::vector<double> truth(noise.size(), 4.0), actual(noise.size());
  for (std::size_t i = 0; i < noise.size(); ++i) actual[i] = truth[i] + noise[i];
  auto r = compute_residuals(actual, truth);
  double m = 0.0;
  for (double v : r) m += v;
  CHECK(std::abs(m / r.size()) < 0.02);
}

TEST_CASE("shewhart limits") {
  auto lim = shewhart_limits(kSpike);
  CHECK(std::abs(lim.center - 1.0) < 1e-12);
  CHECK(std::abs(lim.sigma - 3.16228) < 1e-5);
  CHECK(std::abs(lim.ucl - 7.32456) < 1e-5);
  CHECK(std::abs(lim.lcl + 5.32456) < 1e-5);

  auto flat = shewhart_limits(std::vector<double>{2.5, 2.5, 2.5});
  CHECK(flat.lcl == 2.5);
  CHECK(flat.center == 2.5);
  CHECK(flat.ucl == 2.5);

  auto wide = shewhart_limits(kSpike, 3.0);
  CHECK(wide.ucl > lim.ucl);
  CHECK(wide.lcl < lim.lcl);
  CHECK_THROWS_AS(shewhart_limits(std::vector<double>{1}), std::invalid_argument);
}

TEST_CASE("signals and ARL") {
  auto rep = detect_and_arl(kSpike);
  CHECK(rep.signal_count() == 1);
  CHECK(rep.signals.back());
  REQUIRE(rep.arl.has_value());
  CHECK(*rep.arl == 10.0);

  auto flat = detect_and_arl(std::vector<double>{1, 1, 1, 1});
  CHECK(flat.signal_count() == 0);
  CHECK_FALSE(flat.arl.has_value());

  // mean 1 and sd 1, so at k = 1 both ends sit exactly on a limit
  auto on = detect_and_arl(std::vector<double>{0, 1, 2}, 1.0);
  CHECK(on.lcl == 0.0);
  CHECK(on.ucl == 2.0);
  CHECK(on.signal_count() == 0);
}

TEST_CASE("ARL of standard normal residuals") {
  auto rep = detect_and_arl(normals(100000, 2026));
  REQUIRE(rep.arl.has_value());
  CHECK(*rep.arl >= 20.5);
  CHECK(*rep.arl <= 23.5);
  auto shifted = detect_and_arl(normals(100000, 99, 3.0, 2.5));
  double rate = static_cast<double>(shifted.signal_count()) / 1e5;
  CHECK(std::abs(rate - 0.0455) < 0.003);
}

TEST_CASE("chart invariances") {
  auto base = normals(500, 3);
  auto ref = detect_and_arl(base);
  auto shifted = base, scaled = base;
  for (auto& v : shifted) v += 4.25;
  for (auto& v : scaled) v *= 3.5;
  auto s = detect_and_arl(shifted);
  auto c = detect_and_arl(scaled);
  CHECK(s.signals == ref.signals);
  CHECK(c.signals == ref.signals);
  CHECK(std::abs(s.center - ref.center - 4.25) < 1e-9);
  CHECK(std::abs(s.ucl - ref.ucl - 4.25) < 1e-9);
  CHECK(std::abs(s.lcl - ref.lcl - 4.25) < 1e-9);
  CHECK(s.arl == ref.arl);
  CHECK(c.arl == ref.arl);
  std::size_t prev = base.size();
  for (double k : {1.0, 1.5, 2.0, 2.5, 3.0}) {
    auto r = detect_and_arl(base, k);
    CHECK(r.signal_count() <= prev);
    prev = r.signal_count();
  }
}

TEST_CASE("chart CSV") {
  auto path = temp_path("copsurv_chart_test.csv");
  write_chart_csv(detect_and_arl(std::vector<double>{0.1, -0.2, 0.05}), path);
  {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,residual,center,lcl,ucl,signal");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      CHECK(line.back() == '0');
    }
    CHECK(rows == 3);
  }

  auto rep = detect_and_arl(kSpike);
  write_chart_csv(rep, path);
  {
    std::ifstream in(path);
    std::string line, last;
    while (std::getline(in, line)) last = line;
    CHECK(last.rfind("10,", 0) == 0);
    CHECK(last.back() == '1');
  }
  auto back = read_chart_csv(path);
  CHECK(back.residuals == rep.residuals);
  CHECK(back.center == rep.center);
  CHECK(back.sigma == rep.sigma);
  CHECK(back.lcl == rep.lcl);
  CHECK(back.ucl == rep.ucl);
  CHECK(back.signals == rep.signals);
  CHECK(back.arl == rep.arl);

  auto odd = normals(37, 12);
  auto r2 = detect_and_arl(odd, 1.7);
  write_chart_csv(r2, path);
  auto b2 = read_chart_csv(path, 1.7);
  CHECK(b2.residuals == r2.residuals);
  CHECK(b2.ucl == r2.ucl);
  CHECK(b2.signals == r2.signals);
  std::filesystem::remove(path);

  auto svg = render_svg(rep, "demo");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}
