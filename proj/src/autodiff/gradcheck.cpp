#include "autodiff/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace copsurv::ad {

namespace {

double checked_value(const Tensor& y) {
  if (y.size() != 1) throw ShapeError("finite_diff_check: function must return a scalar");
  double v = y.item();
  if (!std::isfinite(v)) throw NonFiniteError("finite_diff_check: non-finite function value");
  return v;
}

double rel_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic));
}

}  // namespace

double finite_diff_check(const std::function<Tensor(const Tensor&)>& f, const Tensor& x,
                         double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff_check: step must be positive");
  Tensor leaf = x.detach(true);
  Tensor y = f(leaf);
  checked_value(y);
  backward(y);
  std::vector<double> analytic(leaf.size(), 0.0);
  if (!leaf.grad().empty()) std::copy(leaf.grad().begin(), leaf.grad().end(), analytic.begin());

  std::vector<double> base(x.data().begin(), x.data().end());
  double worst = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    auto probe = base;
    probe[i] = base[i] + step;
    double up = checked_value(f(Tensor::from(x.shape(), probe)));
    probe[i] = base[i] - step;
    double down = checked_value(f(Tensor::from(x.shape(), probe)));
    worst = std::max(worst, rel_error(analytic[i], (up - down) / (2.0 * step)));
  }
  return worst;
}

double finite_diff_check_params(const std::function<Tensor()>& loss, std::vector<Tensor> params,
                                double step, std::size_t stride) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff_check: step must be positive");
  if (stride == 0) stride = 1;
  for (auto& p : params) p.zero_grad();
  Tensor y = loss();
  checked_value(y);
  backward(y);

  double worst = 0.0;
  for (auto& p : params) {
    std::vector<double> analytic(p.size(), 0.0);
    if (!p.grad().empty()) std::copy(p.grad().begin(), p.grad().end(), analytic.begin());
    auto data = p.mutable_data();
    for (std::size_t i = 0; i < data.size(); i += stride) {
      double orig = data[i];
      data[i] = orig + step;
      double up = checked_value(loss());
      data[i] = orig - step;
      double down = checked_value(loss());
      data[i] = orig;
      worst = std::max(worst, rel_error(analytic[i], (up - down) / (2.0 * step)));
    }
  }
  return worst;
}

}  // namespace copsurv::ad
