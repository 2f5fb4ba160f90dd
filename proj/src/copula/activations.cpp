#include "copula/activations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "autodiff/ops.hpp"

namespace copsurv::copula {

namespace {

void require_scalar_theta(const ad::Tensor& theta) {
  if (theta.size() != 1) throw std::invalid_argument("theta must be a single value");
}

void require_clayton_theta(double theta) {
  if (!(theta > 0.0)) {
    throw std::domain_error("Clayton theta must be > 0, got " + std::to_string(theta));
  }
}

void require_gumbel_theta(double theta) {
  if (!(theta >= 1.0)) {
    throw std::domain_error("Gumbel theta must be >= 1, got " + std::to_string(theta));
  }
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::clayton: return "clayton";
    case Activation::gumbel: return "gumbel";
    case Activation::hybrid: return "clayton-gumbel";
    case Activation::clayton_relu: return "clayton-relu";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
  }
  return "?";
}

Activation activation_from_string(std::string_view s) {
  if (s == "clayton") return Activation::clayton;
  if (s == "gumbel") return Activation::gumbel;
  if (s == "clayton-gumbel" || s == "hybrid") return Activation::hybrid;
  if (s == "clayton-relu") return Activation::clayton_relu;
  if (s == "relu") return Activation::relu;
  if (s == "sigmoid") return Activation::sigmoid;
  throw std::invalid_argument("unknown activation '" + std::string(s) + "'");
}

std::string_view display_name(Activation a) {
  switch (a) {
    case Activation::clayton: return "Clayton";
    case Activation::gumbel: return "Gumbel";
    case Activation::hybrid: return "Clayton-Gumbel";
    case Activation::clayton_relu: return "Clayton-ReLU";
    case Activation::relu: return "ReLU";
    case Activation::sigmoid: return "Sigmoid";
  }
  return "?";
}

bool uses_clayton(Activation a) {
  return a == Activation::clayton || a == Activation::hybrid || a == Activation::clayton_relu;
}

bool uses_gumbel(Activation a) { return a == Activation::gumbel || a == Activation::hybrid; }

const std::vector<Activation>& all_activations() {
  static const std::vector<Activation> all{Activation::clayton,      Activation::gumbel,
                                           Activation::hybrid,       Activation::relu,
                                           Activation::clayton_relu, Activation::sigmoid};
  return all;
}

double softplus(double phi) {
  return phi > 0.0 ? phi + std::log1p(std::exp(-phi)) : std::log1p(std::exp(phi));
}

double theta_from_phi(double phi, ThetaDomain domain) {
  double sp = softplus(phi);
  return domain == ThetaDomain::gumbel ? 1.0 + sp : sp;
}

ad::Tensor theta_from_phi(const ad::Tensor& phi, ThetaDomain domain) {
  auto sp = ad::softplus(phi);
  return domain == ThetaDomain::gumbel ? ad::shift(sp, 1.0) : sp;
}

double phi_for_theta(double theta, ThetaDomain domain) {
  double sp = domain == ThetaDomain::gumbel ? theta - 1.0 : theta;
  if (!(sp > 0.0)) throw std::domain_error("theta outside the reparameterization range");
  // softplus^-1(s) = log(e^s - 1), written to stay accurate for large s
  return sp > 30.0 ? sp + std::log(-std::expm1(-sp)) : std::log(std::expm1(sp));
}

ad::Tensor gauss_cdf(const ad::Tensor& x) {
  auto e = ad::erf(ad::scale(x, std::numbers::sqrt2 / 2.0));
  auto u = ad::scale(ad::shift(e, 1.0), 0.5);
  return ad::clamp(u, kUniformEps, 1.0 - kUniformEps);
}

ad::Tensor clayton_activation(const ad::Tensor& x, const ad::Tensor& theta) {
  require_scalar_theta(theta);
  require_clayton_theta(theta.item());
  auto log_u = ad::log(gauss_cdf(x));
  // w = u^-theta - 1; g = w^(-1/theta)
  auto w = ad::shift(ad::exp(ad::neg(ad::mul(theta, log_u))), -1.0);
  return ad::exp(ad::neg(ad::div(ad::log(w), theta)));
}

ad::Tensor gumbel_activation(const ad::Tensor& x, const ad::Tensor& theta) {
  require_scalar_theta(theta);
  require_gumbel_theta(theta.item());
  auto neg_log_u = ad::neg(ad::log(gauss_cdf(x)));
  auto powered = ad::exp(ad::mul(theta, ad::log(neg_log_u)));
  return ad::exp(ad::neg(powered));
}

ad::Tensor hybrid_activation(const ad::Tensor& x, const ad::Tensor& theta_c,
                             const ad::Tensor& theta_g) {
  return ad::scale(ad::add(clayton_activation(x, theta_c), gumbel_activation(x, theta_g)), 0.5);
}

ad::Tensor clayton_relu_activation(const ad::Tensor& x, const ad::Tensor& theta) {
  return ad::relu(clayton_activation(x, theta));
}

ad::Tensor clayton_activation(const ad::Tensor& x, double theta) {
  return clayton_activation(x, ad::Tensor::scalar(theta));
}

ad::Tensor gumbel_activation(const ad::Tensor& x, double theta) {
  return gumbel_activation(x, ad::Tensor::scalar(theta));
}

ad::Tensor hybrid_activation(const ad::Tensor& x, double theta_c, double theta_g) {
  return hybrid_activation(x, ad::Tensor::scalar(theta_c), ad::Tensor::scalar(theta_g));
}

ad::Tensor clayton_relu_activation(const ad::Tensor& x, double theta) {
  return clayton_relu_activation(x, ad::Tensor::scalar(theta));
}

CopulaParams CopulaParams::initial(Activation family, std::size_t heads) {
  CopulaParams p;
  p.family = family;
  if (uses_clayton(family)) {
    double phi = phi_for_theta(kInitialThetaClayton, ThetaDomain::clayton);
    for (std::size_t j = 0; j < heads; ++j) p.phi_clayton.push_back(ad::Tensor::scalar(phi, true));
  }
  if (uses_gumbel(family)) {
    double phi = phi_for_theta(kInitialThetaGumbel, ThetaDomain::gumbel);
    for (std::size_t j = 0; j < heads; ++j) p.phi_gumbel.push_back(ad::Tensor::scalar(phi, true));
  }
  return p;
}

std::size_t CopulaParams::heads() const {
  return std::max(phi_clayton.size(), phi_gumbel.size());
}

std::vector<ad::Tensor> CopulaParams::trainable() const {
  std::vector<ad::Tensor> out(phi_clayton.begin(), phi_clayton.end());
  out.insert(out.end(), phi_gumbel.begin(), phi_gumbel.end());
  return out;
}

std::vector<double> CopulaParams::theta_clayton() const {
  std::vector<double> out;
  for (const auto& p : phi_clayton) out.push_back(theta_from_phi(p.item(), ThetaDomain::clayton));
  return out;
}

std::vector<double> CopulaParams::theta_gumbel() const {
  std::vector<double> out;
  for (const auto& p : phi_gumbel) out.push_back(theta_from_phi(p.item(), ThetaDomain::gumbel));
  return out;
}

ad::Tensor apply_activation(const ad::Tensor& pre, const CopulaParams& params) {
  switch (params.family) {
    case Activation::relu: return ad::relu(pre);
    case Activation::sigmoid: return ad::sigmoid(pre);
    default: break;
  }
  std::size_t heads = pre.cols();
  if (uses_clayton(params.family) && params.phi_clayton.size() != heads) {
    throw std::invalid_argument("copula parameter count does not match output heads");
  }
  if (uses_gumbel(params.family) && params.phi_gumbel.size() != heads) {
    throw std::invalid_argument("copula parameter count does not match output heads");
  }
  std::vector<ad::Tensor> cols;
  cols.reserve(heads);
  for (std::size_t j = 0; j < heads; ++j) {
    auto col = ad::slice_cols(pre, j, 1);
    switch (params.family) {
      case Activation::clayton:
        cols.push_back(clayton_activation(
            col, theta_from_phi(params.phi_clayton[j], ThetaDomain::clayton)));
        break;
      case Activation::gumbel:
        cols.push_back(gumbel_activation(
            col, theta_from_phi(params.phi_gumbel[j], ThetaDomain::gumbel)));
        break;
      case Activation::hybrid:
        cols.push_back(hybrid_activation(
            col, theta_from_phi(params.phi_clayton[j], ThetaDomain::clayton),
            theta_from_phi(params.phi_gumbel[j], ThetaDomain::gumbel)));
        break;
      case Activation::clayton_relu:
        cols.push_back(clayton_relu_activation(
            col, theta_from_phi(params.phi_clayton[j], ThetaDomain::clayton)));
        break;
      default: break;
    }
  }
  return ad::concat_cols(cols);
}

}  // namespace copsurv::copula
