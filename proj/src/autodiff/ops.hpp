#pragma once

#include <cstddef>
#include <vector>

#include "autodiff/tensor.hpp"

namespace copsurv::ad {

// Floor applied to arguments of log, div and fractional pow.
inline constexpr double kDomainEps = 1e-12;

enum class OpKind {
  add, sub, mul, div, neg, exp, log, pow, sigmoid, tanh, relu, erf, clamp, sqrt, softplus
};

// Binary ops take equal shapes or a one-element operand broadcast against
// the other. Clamped regions carry zero gradient.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);
Tensor maximum(const Tensor& a, const Tensor& b);  // ties pick a

Tensor neg(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);
Tensor pow(const Tensor& a, double p);
Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor erf(const Tensor& a);
Tensor clamp(const Tensor& a, double lo, double hi);
Tensor sqrt(const Tensor& a);
Tensor softplus(const Tensor& a);
Tensor scale(const Tensor& a, double c);
Tensor shift(const Tensor& a, double c);

// Dispatcher over the element-wise kinds; `param` is the exponent for pow
// and {lo, hi} for clamp.
Tensor elementwise(OpKind kind, const Tensor& a, const Tensor& b = {},
                   std::vector<double> param = {});

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
// x[batch x in] * W[out x in]^T + bias[out]; bias may be undefined.
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& bias);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);

Tensor reshape(const Tensor& a, Shape shape);
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t count);
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t count);
Tensor concat_rows(const std::vector<Tensor>& parts);

}  // namespace copsurv::ad
