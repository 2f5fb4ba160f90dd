#pragma once

#include <span>
#include <vector>

namespace copsurv::copula {

enum class CopulaFamily { clayton, gumbel };

// Bivariate copula C(u, v; theta) on [0,1]^2. Clayton needs theta > 0,
// Gumbel theta >= 1. Diagnostics only; never part of a training graph.
double copula_cdf(double u, double v, double theta, CopulaFamily family);

// log c(u, v; theta) of the Clayton copula, u, v in (0,1), theta > 0.
double clayton_log_density(double u, double v, double theta);

// Rank-based pseudo-observations rank / (n + 1); ties share the average rank.
std::vector<double> pseudo_observations(std::span<const double> x);

}  // namespace copsurv::copula
