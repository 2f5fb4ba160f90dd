#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "autodiff/tensor.hpp"

namespace copsurv::ad {

// Max over coordinates of |analytic - central difference| / max(1, |analytic|).
double finite_diff_check(const std::function<Tensor(const Tensor&)>& f, const Tensor& x,
                         double step);

// Same check over a set of leaf parameters that `loss` reads in place.
// `stride` > 1 samples every stride-th coordinate of each parameter.
double finite_diff_check_params(const std::function<Tensor()>& loss, std::vector<Tensor> params,
                                double step, std::size_t stride = 1);

}  // namespace copsurv::ad
