#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "metrics/losses.hpp"
#include "nn/model.hpp"
#include "util/window_set.hpp"

namespace copsurv::nn {

enum class OptimizerKind { sgd, adam };

std::string_view to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(std::string_view s);

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  OptimizerKind optimizer = OptimizerKind::adam;
  std::uint64_t seed = 42;
  metrics::LossMode loss;
  // Global gradient-norm ceiling; 0 disables clipping.
  double clip_norm = 1.0;
  // Continuous heads are trained on y / max(training y) and predictions are
  // mapped back through the model's target scale.
  bool scale_continuous = true;

  void validate() const;
};

// Plain gradient step or Adam (beta1 0.9, beta2 0.999, eps 1e-8) over leaf
// tensors updated in place.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, std::vector<Tensor> params, double lr, double clip_norm = 0.0);

  void zero_grad();
  void step();
  std::size_t steps() const { return t_; }

 private:
  OptimizerKind kind_;
  std::vector<Tensor> params_;
  double lr_;
  double clip_norm_;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  std::size_t t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

struct TrainReport {
  std::vector<double> epoch_loss;  // mean minibatch loss of each epoch
  std::size_t steps = 0;
  std::vector<double> target_scale;

  double first_loss() const { return epoch_loss.empty() ? 0.0 : epoch_loss.front(); }
  double final_loss() const { return epoch_loss.empty() ? 0.0 : epoch_loss.back(); }
};

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

// Time-major batch of the given window indices.
Sequence gather_sequence(const WindowSet& data, std::span<const std::size_t> idx);
Tensor gather_targets(const std::vector<double>& flat, std::size_t width,
                      std::span<const std::size_t> idx);

// Shuffled minibatches per epoch; a trailing batch of one sample is merged
// into the previous batch so batch norm always sees at least two rows.
std::vector<std::vector<std::size_t>> make_batches(std::size_t count, std::size_t batch_size,
                                                   Rng& rng);

TrainReport train(Model& model, const WindowSet& data, std::span<const metrics::HeadKind> heads,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});

// Eval-mode predictions in target units, [count x heads] row-major.
std::vector<double> predict(Model& model, const WindowSet& data, std::size_t batch_size = 256);

}  // namespace copsurv::nn
