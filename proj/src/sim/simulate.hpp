#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "util/rng.hpp"
#include "util/window_set.hpp"

namespace copsurv::sim {

inline constexpr std::size_t kResponses = 3;

struct SimConfig {
  std::size_t n = 500;
  double shape = 1.5;    // Weibull k
  double scale = 2.0;    // Weibull lambda
  double rho = 0.9;
  double noise_sd = 0.5;
  double censor_rate = 0.1;
  double binary_threshold = 5.0;
  std::array<double, 2> cat_cuts{2.0, 5.0};
  std::uint64_t seed = 42;

  void validate() const;
};

enum class Category { low = 0, medium = 1, high = 2 };
std::string_view to_string(Category c);

using Times = std::array<std::vector<double>, kResponses>;

struct CensoredTimes {
  Times observed;
  std::array<std::vector<int>, kResponses> delta;
};

// Per-subject responses j = 1..3 stored column-wise (index j - 1).
struct SurvivalDataset {
  Times true_time;
  Times censor_time;
  Times observed;
  std::array<std::vector<int>, kResponses> delta;
  std::vector<int> y2;
  std::vector<Category> y3;

  std::size_t size() const { return y2.size(); }
};

// Inverse transform T = lambda (-ln U)^(1/k).
double weibull_from_uniform(double u, double shape, double scale);
double sample_weibull(double shape, double scale, Rng& rng);

// rho * t1 + (1 - rho) * (w + noise)
double dependent_time(double t1, double w, double noise, double rho);

// Event-time substreams are keyed (seed, subject, response, 0); response 1
// draws T1, responses 2 and 3 draw W then N, redrawing both until the
// combined time is positive.
Times generate_marginals(const SimConfig& cfg);

// Censoring substreams are keyed (seed, subject, response, 1):
// C = -ln(U) / censor_rate, T_obs = min(T, C), delta = 1{T <= C}.
CensoredTimes apply_censoring(const Times& times, const SimConfig& cfg, Times* censor_out = nullptr);
void censor_one(double t, double c, double& observed, int& delta);

int binary_label(double observed, const SimConfig& cfg);
Category category_label(double observed, const SimConfig& cfg);

SurvivalDataset simulate(const SimConfig& cfg);

// Supervised sliding windows over subjects: X holds rows t-T..t-1 of the
// (T1_obs, Y2, Y3 code) triple, y holds row t. Features are standardized
// with the full-column mean and sample SD unless disabled.
WindowSet make_windows(const SurvivalDataset& data, std::size_t timesteps, bool standardize = true);

// `id,T1_obs,delta1,T2_obs,delta2,Y2,T3_obs,delta3,Y3,Y3_code`
void write_dataset_csv(const SurvivalDataset& data, const std::string& path);
// Reads the observed columns back (true and censoring times are not stored).
SurvivalDataset read_dataset_csv(const std::string& path);

struct SimSummary {
  std::array<double, kResponses> censored_fraction{};
  double y2_rate = 0.0;
  std::array<double, 3> y3_freq{};
  double corr_t1_t2 = 0.0;  // on true times
};

SimSummary summarize(const SurvivalDataset& data);
double pearson(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace copsurv::sim
