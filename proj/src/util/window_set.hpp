#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace copsurv {

// Supervised sequence samples in flat row-major storage.
struct WindowSet {
  std::size_t count = 0;
  std::size_t timesteps = 0;
  std::size_t features = 0;
  std::size_t targets = 0;
  std::vector<double> x;      // count x timesteps x features
  std::vector<double> y;      // count x targets
  std::vector<double> delta;  // count x targets, event indicators (1 when uncensored)

  double x_at(std::size_t i, std::size_t t, std::size_t f) const {
    return x[(i * timesteps + t) * features + f];
  }
  double y_at(std::size_t i, std::size_t j) const { return y[i * targets + j]; }

  // Rows [begin, begin + n) as a new set.
  WindowSet slice(std::size_t begin, std::size_t n) const {
    if (begin + n > count) throw std::out_of_range("WindowSet::slice out of range");
    WindowSet w;
    w.count = n;
    w.timesteps = timesteps;
    w.features = features;
    w.targets = targets;
    auto xs = static_cast<std::ptrdiff_t>(timesteps * features);
    auto ts = static_cast<std::ptrdiff_t>(targets);
    auto b = static_cast<std::ptrdiff_t>(begin);
    auto e = static_cast<std::ptrdiff_t>(begin + n);
    w.x.assign(x.begin() + b * xs, x.begin() + e * xs);
    w.y.assign(y.begin() + b * ts, y.begin() + e * ts);
    w.delta.assign(delta.begin() + b * ts, delta.begin() + e * ts);
    return w;
  }
};

}  // namespace copsurv
