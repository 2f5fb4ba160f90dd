#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "autodiff/tensor.hpp"

namespace copsurv::metrics {

enum class HeadKind { continuous, binary, ordinal };

enum class ContinuousMode { plain_mse, censor_hinge };

std::string_view to_string(ContinuousMode m);
ContinuousMode continuous_mode_from_string(std::string_view s);

struct LossMode {
  ContinuousMode continuous = ContinuousMode::plain_mse;
  std::vector<double> head_weights;  // empty = all 1
};

// Clamp applied to binary-head predictions before cross-entropy.
inline constexpr double kProbEps = 1e-6;

// Weighted sum over heads of the per-head mean loss:
//   continuous  plain-mse: (y - p)^2; censor-hinge: (y - p)^2 if delta = 1,
//               max(0, y - p)^2 otherwise
//   binary      -[y log p + (1 - y) log(1 - p)], p clamped to [1e-6, 1 - 1e-6]
//   ordinal     (y - p)^2 on integer codes
// pred/target/delta are [batch x heads].
ad::Tensor multi_task_loss(const ad::Tensor& pred, const ad::Tensor& target,
                           const ad::Tensor& delta, std::span<const HeadKind> heads,
                           const LossMode& mode);

struct RegressionMetrics {
  double mse = 0.0;
  double mae = 0.0;
};

RegressionMetrics regression_metrics(std::span<const double> pred, std::span<const double> target);

// Gaussian log-likelihood at the MLE variance: -(n/2) ln(2 pi s2) - n/2,
// s2 the population variance.
double residual_log_likelihood(std::span<const double> residuals);

// Sum of Clayton log-densities over rank pseudo-observations of two series.
double copula_log_likelihood(std::span<const double> a, std::span<const double> b, double theta);

}  // namespace copsurv::metrics
