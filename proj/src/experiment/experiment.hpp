#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "io/comparison.hpp"
#include "nn/train.hpp"
#include "sim/simulate.hpp"

namespace copsurv::experiment {

struct Variant {
  nn::Architecture architecture = nn::Architecture::lstm;
  copula::Activation activation = copula::Activation::relu;

  // "CNN-LSTM Clayton"
  std::string label() const;
  // "cnn-lstm:clayton"
  std::string key() const;
  bool operator==(const Variant&) const = default;
};

// CNN-LSTM rows first, activations in table order.
const std::vector<Variant>& all_variants();
std::size_t variant_index(const Variant& v);
// Comma-separated "arch:activation" list; "all" or empty selects every variant.
std::vector<Variant> parse_variants(const std::string& list);

// continuous T1, binary Y2, ordinal Y3
std::vector<metrics::HeadKind> simulated_heads();
std::string response_name(std::size_t j);  // Response_1, ...

struct Split {
  WindowSet train;
  WindowSet test;
};

// First floor(fraction * count) windows train, the rest test.
Split split_windows(const WindowSet& windows, double fraction);

struct TrainOutcome {
  nn::Model model;
  nn::TrainReport report;
  WindowSet test;
  std::vector<double> predictions;  // test x heads
};

struct TrainRequest {
  Variant variant;
  std::size_t timesteps = 10;
  double split = 0.8;
  std::uint64_t model_seed = 42;
  nn::TrainConfig train;
};

TrainOutcome train_variant(const WindowSet& windows, const TrainRequest& req,
                           const nn::EpochCallback& on_epoch = {});

struct PredictionRow {
  std::size_t index = 0;  // 1-based position in the test series
  std::string response;
  double actual = 0.0;
  double predicted = 0.0;
  int delta = 1;
};

// `index,response,actual,predicted,delta`
std::vector<PredictionRow> prediction_rows(const WindowSet& test, const std::vector<double>& pred);
void write_predictions_csv(const std::vector<PredictionRow>& rows, const std::string& path);
std::vector<PredictionRow> read_predictions_csv(const std::string& path);

struct ExperimentConfig {
  sim::SimConfig sim;
  nn::TrainConfig train;
  std::size_t timesteps = 10;
  double split = 0.8;
  std::size_t replicates = 30;
  std::vector<Variant> variants = all_variants();
  double k_sigma = 2.0;
  std::size_t threads = 1;

  void validate() const;
};

// Seeds for replicate r derive only from sim.seed + r and the variant's
// canonical index, so any replicate can be rerun on its own.
std::uint64_t model_seed(std::uint64_t replicate_seed, const Variant& v);

struct ReplicateResult {
  std::array<std::vector<double>, sim::kResponses> residuals;
  std::array<std::optional<double>, sim::kResponses> arl;
};

// Runs one (replicate, variant) job.
ReplicateResult run_job(const ExperimentConfig& cfg, std::size_t replicate, const Variant& v);

// Residual statistics pool every test residual across replicates; ARL
// statistics use only replicates whose chart signalled, with SD undefined
// below two such replicates.
std::vector<io::ComparisonRow> aggregate(const std::vector<Variant>& variants,
                                         const std::vector<std::vector<ReplicateResult>>& results);

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

std::vector<io::ComparisonRow> run_compare(const ExperimentConfig& cfg,
                                           const ProgressCallback& progress = {});

}  // namespace copsurv::experiment
