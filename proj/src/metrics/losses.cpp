#include "metrics/losses.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "autodiff/ops.hpp"
#include "copula/copula.hpp"

namespace copsurv::metrics {

std::string_view to_string(ContinuousMode m) {
  return m == ContinuousMode::plain_mse ? "plain-mse" : "censor-hinge";
}

ContinuousMode continuous_mode_from_string(std::string_view s) {
  if (s == "plain-mse") return ContinuousMode::plain_mse;
  if (s == "censor-hinge") return ContinuousMode::censor_hinge;
  throw std::invalid_argument("unknown loss mode '" + std::string(s) + "'");
}

namespace {

ad::Tensor squared_error(const ad::Tensor& y, const ad::Tensor& p) {
  return ad::pow(ad::sub(y, p), 2.0);
}

ad::Tensor complement(const ad::Tensor& t) { return ad::shift(ad::neg(t), 1.0); }

}  // namespace

ad::Tensor multi_task_loss(const ad::Tensor& pred, const ad::Tensor& target,
                           const ad::Tensor& delta, std::span<const HeadKind> heads,
                           const LossMode& mode) {
  if (pred.shape() != target.shape() || pred.shape() != delta.shape()) {
    throw ad::ShapeError("multi_task_loss: pred/target/delta shapes differ");
  }
  if (pred.cols() != heads.size()) {
    throw ad::ShapeError("multi_task_loss: head count does not match prediction width");
  }
  if (!mode.head_weights.empty() && mode.head_weights.size() != heads.size()) {
    throw std::invalid_argument("multi_task_loss: head weight count mismatch");
  }
  for (double w : mode.head_weights) {
    if (!(w > 0.0)) throw std::invalid_argument("multi_task_loss: head weights must be > 0");
  }
  for (double v : pred.data()) {
    if (!std::isfinite(v)) throw ad::NonFiniteError("multi_task_loss: non-finite prediction");
  }

  ad::Tensor total;
  for (std::size_t j = 0; j < heads.size(); ++j) {
    auto p = ad::slice_cols(pred, j, 1);
    auto y = ad::slice_cols(target, j, 1);
    ad::Tensor per_row;
    switch (heads[j]) {
      case HeadKind::continuous:
        if (mode.continuous == ContinuousMode::plain_mse) {
          per_row = squared_error(y, p);
        } else {
          auto d = ad::slice_cols(delta, j, 1);
          auto diff = ad::sub(y, p);
          auto hinge = ad::pow(ad::relu(diff), 2.0);
          per_row = ad::add(ad::mul(d, ad::pow(diff, 2.0)), ad::mul(complement(d), hinge));
        }
        break;
      case HeadKind::binary: {
        auto pc = ad::clamp(p, kProbEps, 1.0 - kProbEps);
        per_row = ad::neg(ad::add(ad::mul(y, ad::log(pc)),
                                  ad::mul(complement(y), ad::log(complement(pc)))));
        break;
      }
      case HeadKind::ordinal:
        per_row = squared_error(y, p);
        break;
    }
    auto head_loss = ad::mean(per_row);
    if (!mode.head_weights.empty()) head_loss = ad::scale(head_loss, mode.head_weights[j]);
    total = total.defined() ? ad::add(total, head_loss) : head_loss;
  }
  return total;
}

RegressionMetrics regression_metrics(std::span<const double> pred,
                                     std::span<const double> target) {
  if (pred.size() != target.size()) throw std::invalid_argument("regression_metrics: length mismatch");
  if (pred.empty()) throw std::invalid_argument("regression_metrics: empty input");
  RegressionMetrics m;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    double d = target[i] - pred[i];
    m.mse += d * d;
    m.mae += std::abs(d);
  }
  m.mse /= static_cast<double>(pred.size());
  m.mae /= static_cast<double>(pred.size());
  return m;
}

double residual_log_likelihood(std::span<const double> residuals) {
  if (residuals.size() < 2) throw std::invalid_argument("log-likelihood needs >= 2 residuals");
  double n = static_cast<double>(residuals.size());
  double mu = 0.0;
  for (double r : residuals) mu += r;
  mu /= n;
  double s2 = 0.0;
  for (double r : residuals) s2 += (r - mu) * (r - mu);
  s2 /= n;
  if (!(s2 > 0.0)) throw std::domain_error("log-likelihood undefined for zero variance");
  return -0.5 * n * std::log(2.0 * std::numbers::pi * s2) - 0.5 * n;
}

double copula_log_likelihood(std::span<const double> a, std::span<const double> b, double theta) {
  if (a.size() != b.size()) throw std::invalid_argument("copula log-likelihood: length mismatch");
  auto u = copula::pseudo_observations(a);
  auto v = copula::pseudo_observations(b);
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) total += copula::clayton_log_density(u[i], v[i], theta);
  return total;
}

}  // namespace copsurv::metrics
