#include "nn/train.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace copsurv::nn {

namespace {

constexpr std::uint64_t kShuffleStream = 0x5f;
constexpr std::uint64_t kDropoutStream = 0xd0;

}  // namespace

std::string_view to_string(OptimizerKind k) { return k == OptimizerKind::sgd ? "sgd" : "adam"; }

OptimizerKind optimizer_from_string(std::string_view s) {
  if (s == "sgd") return OptimizerKind::sgd;
  if (s == "adam") return OptimizerKind::adam;
  throw std::invalid_argument("unknown optimizer '" + std::string(s) + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning rate must be a finite value >= 0");
  }
  if (epochs == 0) throw std::invalid_argument("epochs must be >= 1");
  if (batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
  if (!(clip_norm >= 0.0)) throw std::invalid_argument("clip norm must be >= 0");
  for (double w : loss.head_weights) {
    if (!(w > 0.0)) throw std::invalid_argument("head weights must be > 0");
  }
}

Optimizer::Optimizer(OptimizerKind kind, std::vector<Tensor> params, double lr, double clip_norm)
    : kind_(kind), params_(std::move(params)), lr_(lr), clip_norm_(clip_norm) {
  for (const auto& p : params_) {
    if (!p.is_leaf() || !p.requires_grad()) {
      throw std::invalid_argument("optimizer parameters must be trainable leaves");
    }
    m_.emplace_back(p.size(), 0.0);
    v_.emplace_back(p.size(), 0.0);
  }
}

void Optimizer::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

void Optimizer::step() {
  ++t_;
  double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  double factor = 1.0;
  if (clip_norm_ > 0.0) {
    double sq = 0.0;
    for (const auto& p : params_) {
      for (double g : p.grad()) sq += g * g;
    }
    double norm = std::sqrt(sq);
    if (norm > clip_norm_) factor = clip_norm_ / norm;
  }
  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto grad = params_[k].grad();
    if (grad.empty()) continue;
    auto w = params_[k].mutable_data();
    if (kind_ == OptimizerKind::sgd) {
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr_ * factor * grad[i];
      continue;
    }
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      double g = factor * grad[i];
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g;
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g * g;
      w[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
    }
  }
}

Sequence gather_sequence(const WindowSet& data, std::span<const std::size_t> idx) {
  Sequence seq;
  seq.reserve(data.timesteps);
  for (std::size_t t = 0; t < data.timesteps; ++t) {
    std::vector<double> v;
    v.reserve(idx.size() * data.features);
    for (auto i : idx) {
      for (std::size_t f = 0; f < data.features; ++f) v.push_back(data.x_at(i, t, f));
    }
    seq.push_back(Tensor::matrix(idx.size(), data.features, std::move(v)));
  }
  return seq;
}

Tensor gather_targets(const std::vector<double>& flat, std::size_t width,
                      std::span<const std::size_t> idx) {
  std::vector<double> v;
  v.reserve(idx.size() * width);
  for (auto i : idx) {
    v.insert(v.end(), flat.begin() + static_cast<std::ptrdiff_t>(i * width),
             flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * width));
  }
  return Tensor::matrix(idx.size(), width, std::move(v));
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t count, std::size_t batch_size,
                                                   Rng& rng) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = count; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t b = 0; b < count; b += batch_size) {
    std::size_t e = std::min(count, b + batch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(b),
                         order.begin() + static_cast<std::ptrdiff_t>(e));
  }
  if (batches.size() > 1 && batches.back().size() < 2) {
    auto tail = batches.back();
    batches.pop_back();
    batches.back().insert(batches.back().end(), tail.begin(), tail.end());
  }
  return batches;
}

TrainReport train(Model& model, const WindowSet& data, std::span<const metrics::HeadKind> heads,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  if (data.count < 2) throw std::invalid_argument("training needs at least 2 samples");
  if (data.timesteps != model.spec().timesteps || data.features != model.spec().features) {
    throw std::invalid_argument("data shape does not match the model spec");
  }
  if (data.targets != model.spec().heads || heads.size() != data.targets) {
    throw std::invalid_argument("target count does not match the model heads");
  }

  std::vector<double> scale(data.targets, 1.0);
  if (cfg.scale_continuous) {
    for (std::size_t j = 0; j < data.targets; ++j) {
      if (heads[j] != metrics::HeadKind::continuous) continue;
      double mx = 0.0;
      for (std::size_t i = 0; i < data.count; ++i) mx = std::max(mx, std::abs(data.y_at(i, j)));
      if (mx > 0.0) scale[j] = mx;
    }
  }
  model.set_target_scale(scale);
  std::vector<double> y = data.y;
  for (std::size_t i = 0; i < data.count; ++i) {
    for (std::size_t j = 0; j < data.targets; ++j) y[i * data.targets + j] /= scale[j];
  }

  Rng shuffle = Rng::substream(cfg.seed, kShuffleStream);
  Rng dropout = Rng::substream(cfg.seed, kDropoutStream);
  Optimizer opt(cfg.optimizer, model.parameters(), cfg.learning_rate, cfg.clip_norm);
  TrainReport report;
  report.target_scale = scale;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double total = 0.0;
    for (const auto& batch : make_batches(data.count, cfg.batch_size, shuffle)) {
      auto input = gather_sequence(data, batch);
      auto target = gather_targets(y, data.targets, batch);
      auto delta = gather_targets(data.delta, data.targets, batch);
      opt.zero_grad();
      auto pred = model.forward(input, Mode::train, dropout);
      auto loss = metrics::multi_task_loss(pred, target, delta, heads, cfg.loss);
      ad::backward(loss);
      opt.step();
      total += loss.item() * static_cast<double>(batch.size());
    }
    report.epoch_loss.push_back(total / static_cast<double>(data.count));
    if (on_epoch) on_epoch(epoch + 1, report.epoch_loss.back());
  }
  report.steps = opt.steps();
  return report;
}

std::vector<double> predict(Model& model, const WindowSet& data, std::size_t batch_size) {
  std::vector<double> out;
  out.reserve(data.count * model.spec().heads);
  Rng unused(0);
  for (std::size_t b = 0; b < data.count; b += batch_size) {
    std::size_t e = std::min(data.count, b + batch_size);
    std::vector<std::size_t> idx(e - b);
    std::iota(idx.begin(), idx.end(), b);
    auto pred = model.forward(gather_sequence(data, idx), Mode::eval, unused);
    const auto& scale = model.target_scale();
    for (std::size_t k = 0; k < pred.size(); ++k) out.push_back(pred[k] * scale[k % scale.size()]);
  }
  return out;
}

}  // namespace copsurv::nn
