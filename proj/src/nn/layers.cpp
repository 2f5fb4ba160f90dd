#include "nn/layers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "autodiff/ops.hpp"

namespace copsurv::nn {

Tensor dense_forward(const Tensor& x, const Tensor& w, const Tensor& b) {
  return ad::linear(x, w, b);
}

Sequence conv1d_forward(const Sequence& x, const ConvWeights& w) {
  std::size_t k = w.k;
  if (k == 0) throw std::invalid_argument("conv1d: kernel size must be >= 1");
  if (x.size() < k) {
    throw std::invalid_argument("conv1d: sequence length " + std::to_string(x.size()) +
                                " shorter than kernel " + std::to_string(k));
  }
  if (!x.empty() && x[0].cols() * k != w.kernel.cols()) {
    throw ad::ShapeError("conv1d: input channels do not match kernel");
  }
  Sequence out;
  out.reserve(x.size() - k + 1);
  for (std::size_t t = 0; t + k <= x.size(); ++t) {
    Sequence window(x.begin() + static_cast<std::ptrdiff_t>(t),
                    x.begin() + static_cast<std::ptrdiff_t>(t + k));
    Tensor patch = k == 1 ? window[0] : ad::concat_cols(window);
    out.push_back(ad::relu(ad::linear(patch, w.kernel, w.bias)));
  }
  return out;
}

Sequence maxpool1d(const Sequence& x, std::size_t pool) {
  if (pool != 2) throw std::invalid_argument("maxpool1d: only pool size 2 is supported");
  if (x.size() < 2) throw std::invalid_argument("maxpool1d: sequence length must be >= 2");
  Sequence out;
  out.reserve(x.size() / 2);
  for (std::size_t i = 0; i + 1 < x.size(); i += 2) out.push_back(ad::maximum(x[i], x[i + 1]));
  return out;
}

std::vector<Tensor> LstmWeights::parameters() const {
  return {w_f, w_i, w_c, w_o, u_f, u_i, u_c, u_o, b_f, b_i, b_c, b_o};
}

void LstmWeights::validate() const {
  std::size_t h = hidden(), d = input();
  for (const auto& w : {w_f, w_i, w_c, w_o}) {
    if (w.rows() != h || w.cols() != d) throw ad::ShapeError("LSTM: inconsistent W shapes");
  }
  for (const auto& u : {u_f, u_i, u_c, u_o}) {
    if (u.rows() != h || u.cols() != h) throw ad::ShapeError("LSTM: inconsistent U shapes");
  }
  for (const auto& b : {b_f, b_i, b_c, b_o}) {
    if (b.size() != h) throw ad::ShapeError("LSTM: inconsistent bias shapes");
  }
}

namespace {

Tensor gate(const Tensor& x, const Tensor& h, const Tensor& w, const Tensor& u, const Tensor& b) {
  return ad::add(ad::linear(x, w, b), ad::linear(h, u, Tensor()));
}

}  // namespace

LstmState lstm_cell_step(const Tensor& x_t, const LstmState& prev, const LstmWeights& w) {
  if (x_t.cols() != w.input() || prev.h.cols() != w.hidden() || prev.c.cols() != w.hidden()) {
    throw ad::ShapeError("lstm_cell_step: state or input width mismatch");
  }
  auto f = ad::sigmoid(gate(x_t, prev.h, w.w_f, w.u_f, w.b_f));
  auto i = ad::sigmoid(gate(x_t, prev.h, w.w_i, w.u_i, w.b_i));
  auto c_tilde = ad::tanh(gate(x_t, prev.h, w.w_c, w.u_c, w.b_c));
  auto c = ad::add(ad::mul(f, prev.c), ad::mul(i, c_tilde));
  auto o = ad::sigmoid(gate(x_t, prev.h, w.w_o, w.u_o, w.b_o));
  auto h = ad::mul(o, ad::tanh(c));
  return {h, c};
}

Sequence lstm_layer_forward(const Sequence& x, const LstmWeights& w) {
  if (x.empty()) throw std::invalid_argument("lstm_layer_forward: empty sequence");
  std::size_t batch = x[0].rows();
  LstmState state{Tensor::zeros({batch, w.hidden()}), Tensor::zeros({batch, w.hidden()})};
  Sequence out;
  out.reserve(x.size());
  for (const auto& x_t : x) {
    state = lstm_cell_step(x_t, state, w);
    out.push_back(state.h);
  }
  return out;
}

BatchNorm BatchNorm::create(std::size_t features) {
  BatchNorm bn;
  bn.gamma = Tensor::full({features}, 1.0, true);
  bn.beta = Tensor::zeros({features}, true);
  bn.running_mean.assign(features, 0.0);
  bn.running_var.assign(features, 1.0);
  return bn;
}

Tensor batchnorm_forward(const Tensor& x, BatchNorm& bn, Mode mode) {
  std::size_t n = x.rows(), f = x.cols();
  if (f != bn.features()) throw ad::ShapeError("batchnorm: feature count mismatch");
  auto xv = x.data();
  auto gv = bn.gamma.data();
  auto bv = bn.beta.data();

  std::vector<double> mu(f, 0.0), inv_std(f, 0.0);
  if (mode == Mode::train) {
    if (n < 2) throw std::invalid_argument("batchnorm: train mode needs batch >= 2");
    std::vector<double> var(f, 0.0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < f; ++c) mu[c] += xv[r * f + c];
    for (auto& m : mu) m /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < f; ++c) {
        double d = xv[r * f + c] - mu[c];
        var[c] += d * d;
      }
    for (std::size_t c = 0; c < f; ++c) {
      var[c] /= static_cast<double>(n);
      inv_std[c] = 1.0 / std::sqrt(var[c] + bn.eps);
      bn.running_mean[c] = (1.0 - bn.momentum) * bn.running_mean[c] + bn.momentum * mu[c];
      bn.running_var[c] = (1.0 - bn.momentum) * bn.running_var[c] + bn.momentum * var[c];
    }
  } else {
    for (std::size_t c = 0; c < f; ++c) {
      mu[c] = bn.running_mean[c];
      inv_std[c] = 1.0 / std::sqrt(bn.running_var[c] + bn.eps);
    }
  }

  std::vector<double> xhat(n * f), out(n * f);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < f; ++c) {
      std::size_t i = r * f + c;
      xhat[i] = (xv[i] - mu[c]) * inv_std[c];
      out[i] = gv[c] * xhat[i] + bv[c];
    }

  bool batch_stats = mode == Mode::train;
  return ad::make_result(
      "batchnorm", x.shape(), std::move(out), {x, bn.gamma, bn.beta},
      [n, f, batch_stats, xhat = std::move(xhat), inv_std = std::move(inv_std)](ad::Node& self) {
        ad::Node& nx = *self.inputs[0];
        ad::Node& ng = *self.inputs[1];
        ad::Node& nb = *self.inputs[2];
        const auto& g = self.grad;
        if (ng.requires_grad || nb.requires_grad) {
          auto& gg = ng.grad_buffer();
          auto& gb = nb.grad_buffer();
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < f; ++c) {
              gg[c] += g[r * f + c] * xhat[r * f + c];
              gb[c] += g[r * f + c];
            }
        }
        if (!nx.requires_grad) return;
        auto& gx = nx.grad_buffer();
        if (!batch_stats) {
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < f; ++c)
              gx[r * f + c] += g[r * f + c] * ng.value[c] * inv_std[c];
          return;
        }
        std::vector<double> sum_d(f, 0.0), sum_dx(f, 0.0);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < f; ++c) {
            double d = g[r * f + c] * ng.value[c];
            sum_d[c] += d;
            sum_dx[c] += d * xhat[r * f + c];
          }
        double nd = static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < f; ++c) {
            std::size_t i = r * f + c;
            double d = g[i] * ng.value[c];
            gx[i] += inv_std[c] / nd * (nd * d - sum_d[c] - xhat[i] * sum_dx[c]);
          }
      });
}

Tensor dropout_forward(const Tensor& x, double rate, Mode mode, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument("dropout: rate must lie in [0, 1)");
  }
  if (mode == Mode::eval || rate == 0.0) return x;
  double keep_scale = 1.0 / (1.0 - rate);
  std::vector<double> mask(x.size());
  for (auto& m : mask) m = rng.uniform() < rate ? 0.0 : keep_scale;
  return ad::mul(x, Tensor::from(x.shape(), std::move(mask)));
}

}  // namespace copsurv::nn
