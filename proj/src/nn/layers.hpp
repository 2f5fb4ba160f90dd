#pragma once

#include <cstddef>
#include <vector>

#include "autodiff/tensor.hpp"
#include "util/rng.hpp"

namespace copsurv::nn {

using ad::Tensor;

// A time-major sequence: one [batch x features] tensor per step.
using Sequence = std::vector<Tensor>;

enum class Mode { train, eval };

// x[batch x in] * W[out x in]^T + b[out].
Tensor dense_forward(const Tensor& x, const Tensor& w, const Tensor& b);

// Kernel is stored im2col-style as [d_out x (k * d_in)]: column j * d_in + c
// holds tap j for input channel c.
struct ConvWeights {
  Tensor kernel;
  Tensor bias;
  std::size_t k = 0;

  std::size_t in_channels() const { return kernel.cols() / k; }
  std::size_t out_channels() const { return kernel.rows(); }
};

// Valid 1-D cross-correlation, stride 1, followed by ReLU.
// Output length is T - k + 1.
Sequence conv1d_forward(const Sequence& x, const ConvWeights& w);

// Non-overlapping max over pairs; an odd trailing step is dropped and ties
// go to the earlier step.
Sequence maxpool1d(const Sequence& x, std::size_t pool = 2);

struct LstmWeights {
  Tensor w_f, w_i, w_c, w_o;  // [h x d]
  Tensor u_f, u_i, u_c, u_o;  // [h x h]
  Tensor b_f, b_i, b_c, b_o;  // [h]

  std::size_t hidden() const { return w_f.rows(); }
  std::size_t input() const { return w_f.cols(); }
  std::vector<Tensor> parameters() const;
  void validate() const;
};

struct LstmState {
  Tensor h;
  Tensor c;
};

LstmState lstm_cell_step(const Tensor& x_t, const LstmState& prev, const LstmWeights& w);

// Runs the cell from a zero state; returns h_t for every step.
Sequence lstm_layer_forward(const Sequence& x, const LstmWeights& w);

struct BatchNorm {
  Tensor gamma;
  Tensor beta;
  std::vector<double> running_mean;
  std::vector<double> running_var;
  double eps = 1e-5;
  double momentum = 0.1;

  static BatchNorm create(std::size_t features);
  std::size_t features() const { return gamma.size(); }
};

// Train mode normalizes with the batch mean and population variance and
// updates the running statistics; eval mode uses the running statistics.
Tensor batchnorm_forward(const Tensor& x, BatchNorm& bn, Mode mode);

// Inverted dropout. Identity in eval mode or at rate 0.
Tensor dropout_forward(const Tensor& x, double rate, Mode mode, Rng& rng);

}  // namespace copsurv::nn
