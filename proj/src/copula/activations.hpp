#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "autodiff/tensor.hpp"

namespace copsurv::copula {

// Pre-transform clamp on u = Phi(x); keeps Clayton finite as u -> 1.
inline constexpr double kUniformEps = 1e-6;

enum class Activation { clayton, gumbel, hybrid, clayton_relu, relu, sigmoid };

// Canonical CLI spelling: clayton, gumbel, clayton-gumbel, clayton-relu, relu, sigmoid.
// "hybrid" is accepted as an alias of clayton-gumbel.
std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view s);
// Display label used in comparison tables, e.g. "Clayton-Gumbel".
std::string_view display_name(Activation a);
bool uses_clayton(Activation a);
bool uses_gumbel(Activation a);
const std::vector<Activation>& all_activations();

enum class ThetaDomain { clayton, gumbel };

double softplus(double phi);
// clayton: theta = softplus(phi) > 0; gumbel: theta = 1 + softplus(phi) >= 1.
double theta_from_phi(double phi, ThetaDomain domain);
ad::Tensor theta_from_phi(const ad::Tensor& phi, ThetaDomain domain);
// Inverse of theta_from_phi.
double phi_for_theta(double theta, ThetaDomain domain);

inline constexpr double kInitialThetaClayton = 1.0;
inline constexpr double kInitialThetaGumbel = 2.0;

// u = Phi(x) = (1 + erf(x / sqrt 2)) / 2, clamped to [kUniformEps, 1 - kUniformEps].
ad::Tensor gauss_cdf(const ad::Tensor& x);

// theta arguments are one-element tensors broadcast over x.
ad::Tensor clayton_activation(const ad::Tensor& x, const ad::Tensor& theta);
ad::Tensor gumbel_activation(const ad::Tensor& x, const ad::Tensor& theta);
ad::Tensor hybrid_activation(const ad::Tensor& x, const ad::Tensor& theta_c,
                             const ad::Tensor& theta_g);
ad::Tensor clayton_relu_activation(const ad::Tensor& x, const ad::Tensor& theta);

ad::Tensor clayton_activation(const ad::Tensor& x, double theta);
ad::Tensor gumbel_activation(const ad::Tensor& x, double theta);
ad::Tensor hybrid_activation(const ad::Tensor& x, double theta_c, double theta_g);
ad::Tensor clayton_relu_activation(const ad::Tensor& x, double theta);

// Trainable copula parameters of an output layer: one unconstrained phi per
// head for each copula the activation uses.
struct CopulaParams {
  Activation family = Activation::relu;
  std::vector<ad::Tensor> phi_clayton;
  std::vector<ad::Tensor> phi_gumbel;

  static CopulaParams initial(Activation family, std::size_t heads);

  std::size_t heads() const;
  // Leaves in a fixed order (clayton heads, then gumbel heads).
  std::vector<ad::Tensor> trainable() const;
  std::vector<double> theta_clayton() const;
  std::vector<double> theta_gumbel() const;
};

// Applies the family's activation per column of pre[batch x heads], each
// column with its own theta recomputed from phi.
ad::Tensor apply_activation(const ad::Tensor& pre, const CopulaParams& params);

}  // namespace copsurv::copula
