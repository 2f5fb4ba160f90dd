#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "copula/activations.hpp"
#include "nn/layers.hpp"

namespace copsurv::nn {

enum class Architecture { lstm, cnn_lstm };

std::string_view to_string(Architecture a);
Architecture architecture_from_string(std::string_view s);
// "LSTM" / "CNN-LSTM"
std::string_view display_name(Architecture a);

struct ModelSpec {
  Architecture architecture = Architecture::lstm;
  copula::Activation variant = copula::Activation::relu;
  std::size_t timesteps = 10;
  std::size_t features = 3;
  std::size_t hidden = 64;
  std::size_t lstm_layers = 2;
  std::size_t conv_kernel = 3;
  std::array<std::size_t, 2> conv_channels{32, 64};
  std::size_t pool = 2;
  double dropout = 0.3;
  std::size_t heads = 3;

  // Sequence length reaching the LSTM stack; throws if the conv/pool stack
  // cannot consume `timesteps`.
  std::size_t lstm_input_length() const;
  void validate() const;
  // e.g. "CNN-LSTM Clayton-ReLU"
  std::string label() const;
};

// LSTM:     [LSTM -> BN -> Dropout] x layers -> Dense(heads) -> activation
// CNN-LSTM: [Conv1D+ReLU -> MaxPool2] x 2 -> same stack
// BN after a sequence-returning LSTM normalizes over all (step, sample) rows.
class Model {
 public:
  static Model build(const ModelSpec& spec, std::uint64_t seed);

  // `input` has spec.timesteps entries of [batch x features].
  Tensor forward(const Sequence& input, Mode mode, Rng& rng);

  const ModelSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }
  // Every trainable leaf, copula phi last.
  std::vector<Tensor> parameters() const;
  std::size_t parameter_count() const;
  const copula::CopulaParams& copula() const { return copula_; }

  // Per-head factor mapping network outputs back to target units.
  const std::vector<double>& target_scale() const { return target_scale_; }
  void set_target_scale(std::vector<double> scale);

  nlohmann::json to_json() const;
  static Model from_json(const nlohmann::json& doc);
  void save(const std::string& path) const;
  static Model load(const std::string& path);

  // Independent copy of all weights and running statistics.
  Model clone() const;

 private:
  ModelSpec spec_;
  std::uint64_t seed_ = 0;
  std::vector<ConvWeights> convs_;
  std::vector<LstmWeights> lstms_;
  std::vector<BatchNorm> norms_;
  Tensor w_out_;
  Tensor b_out_;
  copula::CopulaParams copula_;
  std::vector<double> target_scale_;
};

}  // namespace copsurv::nn
