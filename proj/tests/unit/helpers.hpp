#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "autodiff/tensor.hpp"

namespace testutil {

inline std::vector<double> uniform_values(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

inline copsurv::ad::Tensor random_tensor(copsurv::ad::Shape shape, double lo, double hi,
                                         std::uint64_t seed, bool requires_grad = true) {
  auto n = copsurv::ad::shape_size(shape);
  return copsurv::ad::Tensor::from(std::move(shape), uniform_values(n, lo, hi, seed), requires_grad);
}

// Lanczos approximation (g = 7, n = 9), independent of std::tgamma.
inline double lanczos_gamma(double z) {
  static const double c[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z < 0.5) return M_PI / (std::sin(M_PI * z) * lanczos_gamma(1.0 - z));
  z -= 1.0;
  double x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + i);
  double t = z + 7.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace testutil
