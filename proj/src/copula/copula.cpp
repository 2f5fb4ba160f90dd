#include "copula/copula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace copsurv::copula {

namespace {

void require_unit(double u, const char* name) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0,1], got " + std::to_string(u));
  }
}

void require_open_unit(double u, const char* name) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in (0,1), got " + std::to_string(u));
  }
}

}  // namespace

double copula_cdf(double u, double v, double theta, CopulaFamily family) {
  require_unit(u, "u");
  require_unit(v, "v");
  if (family == CopulaFamily::clayton) {
    if (!(theta > 0.0)) throw std::domain_error("Clayton theta must be > 0");
  } else if (!(theta >= 1.0)) {
    throw std::domain_error("Gumbel theta must be >= 1");
  }
  if (u == 0.0 || v == 0.0) return 0.0;
  if (v == 1.0) return u;
  if (u == 1.0) return v;

  double lu = std::log(u);
  double lv = std::log(v);
  if (family == CopulaFamily::clayton) {
    // (u^-t + v^-t - 1)^(-1/t), with s = u^-t + v^-t - 2 kept accurate near t = 0
    double s = std::expm1(-theta * lu) + std::expm1(-theta * lv);
    return std::exp(-std::log1p(s) / theta);
  }
  double a = std::pow(-lu, theta) + std::pow(-lv, theta);
  return std::exp(-std::pow(a, 1.0 / theta));
}

double clayton_log_density(double u, double v, double theta) {
  require_open_unit(u, "u");
  require_open_unit(v, "v");
  if (!(theta > 0.0)) throw std::domain_error("Clayton theta must be > 0");
  double lu = std::log(u);
  double lv = std::log(v);
  double s = std::expm1(-theta * lu) + std::expm1(-theta * lv);
  return std::log1p(theta) - (1.0 + theta) * (lu + lv) -
         (2.0 * theta + 1.0) / theta * std::log1p(s);
}

std::vector<double> pseudo_observations(std::span<const double> x) {
  std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) out[idx[k]] = rank / static_cast<double>(n + 1);
    i = j + 1;
  }
  return out;
}

}  // namespace copsurv::copula
