#include "experiment/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "io/csv.hpp"
#include "spc/control_chart.hpp"

namespace copsurv::experiment {

namespace {

constexpr std::uint64_t kModelStream = 0xc0;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
}

}  // namespace

std::string Variant::label() const {
  return std::string(nn::display_name(architecture)) + " " +
         std::string(copula::display_name(activation));
}

std::string Variant::key() const {
  return std::string(nn::to_string(architecture)) + ":" +
         std::string(copula::to_string(activation));
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> v = [] {
    std::vector<Variant> out;
    for (auto arch : {nn::Architecture::cnn_lstm, nn::Architecture::lstm}) {
      for (auto act : {copula::Activation::clayton, copula::Activation::gumbel,
                       copula::Activation::hybrid, copula::Activation::relu,
                       copula::Activation::clayton_relu, copula::Activation::sigmoid}) {
        out.push_back({arch, act});
      }
    }
    return out;
  }();
  return v;
}

std::size_t variant_index(const Variant& v) {
  const auto& all = all_variants();
  return static_cast<std::size_t>(std::find(all.begin(), all.end(), v) - all.begin());
}

std::vector<Variant> parse_variants(const std::string& list) {
  auto t = trim(list);
  if (t.empty() || t == "all") return all_variants();
  std::vector<Variant> out;
  std::size_t pos = 0;
  while (pos <= t.size()) {
    auto comma = t.find(',', pos);
    auto item = trim(t.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("variant '" + item + "' must look like arch:activation");
    }
    Variant v{nn::architecture_from_string(item.substr(0, colon)),
              copula::activation_from_string(item.substr(colon + 1))};
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  std::sort(out.begin(), out.end(),
            [](const Variant& a, const Variant& b) { return variant_index(a) < variant_index(b); });
  return out;
}

std::vector<metrics::HeadKind> simulated_heads() {
  return {metrics::HeadKind::continuous, metrics::HeadKind::binary, metrics::HeadKind::ordinal};
}

std::string response_name(std::size_t j) { return "Response_" + std::to_string(j + 1); }

Split split_windows(const WindowSet& windows, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("split must lie in (0,1)");
  auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(windows.count)));
  if (n_train < 2 || n_train >= windows.count) {
    throw std::invalid_argument("split leaves an empty or too small partition (" +
                                std::to_string(windows.count) + " windows)");
  }
  return {windows.slice(0, n_train), windows.slice(n_train, windows.count - n_train)};
}

TrainOutcome train_variant(const WindowSet& windows, const TrainRequest& req,
                           const nn::EpochCallback& on_epoch) {
  nn::ModelSpec spec;
  spec.architecture = req.variant.architecture;
  spec.variant = req.variant.activation;
  spec.timesteps = req.timesteps;
  spec.features = windows.features;
  spec.heads = windows.targets;
  auto split = split_windows(windows, req.split);
  TrainOutcome out{nn::Model::build(spec, req.model_seed), {}, std::move(split.test), {}};
  auto heads = simulated_heads();
  out.report = nn::train(out.model, split.train, heads, req.train, on_epoch);
  out.predictions = nn::predict(out.model, out.test);
  return out;
}

std::vector<PredictionRow> prediction_rows(const WindowSet& test, const std::vector<double>& pred) {
  std::vector<PredictionRow> rows;
  for (std::size_t j = 0; j < test.targets; ++j) {
    for (std::size_t i = 0; i < test.count; ++i) {
      rows.push_back({i + 1, response_name(j), test.y_at(i, j), pred[i * test.targets + j],
                      static_cast<int>(test.delta[i * test.targets + j])});
    }
  }
  return rows;
}

void write_predictions_csv(const std::vector<PredictionRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "index,response,actual,predicted,delta\n";
  for (const auto& r : rows) {
    out << r.index << ',' << r.response << ',' << io::format_exact(r.actual) << ','
        << io::format_exact(r.predicted) << ',' << r.delta << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<PredictionRow> read_predictions_csv(const std::string& path) {
  auto t = io::read_csv(path);
  auto c_index = t.column("index");
  auto c_resp = t.column("response");
  auto c_actual = t.column("actual");
  auto c_pred = t.column("predicted");
  auto c_delta = t.column("delta");
  std::vector<PredictionRow> rows;
  for (const auto& f : t.rows) {
    long idx = io::parse_int(f[c_index], path);
    long d = io::parse_int(f[c_delta], path);
    if (idx < 1) throw std::invalid_argument(path + ": index must be >= 1");
    if (d != 0 && d != 1) throw std::invalid_argument(path + ": delta must be 0 or 1");
    if (f[c_resp].empty()) throw std::invalid_argument(path + ": empty response name");
    rows.push_back({static_cast<std::size_t>(idx), f[c_resp], io::parse_double(f[c_actual], path),
                    io::parse_double(f[c_pred], path), static_cast<int>(d)});
  }
  return rows;
}

void ExperimentConfig::validate() const {
  sim.validate();
  train.validate();
  if (replicates == 0) throw std::invalid_argument("replicates must be >= 1");
  if (!(split > 0.0 && split < 1.0)) throw std::invalid_argument("split must lie in (0,1)");
  if (variants.empty()) throw std::invalid_argument("variant list is empty");
  if (!(k_sigma > 0.0)) throw std::invalid_argument("sigma multiplier must be > 0");
}

std::uint64_t model_seed(std::uint64_t replicate_seed, const Variant& v) {
  return Rng::substream(replicate_seed, kModelStream, variant_index(v)).next();
}

ReplicateResult run_job(const ExperimentConfig& cfg, std::size_t replicate, const Variant& v) {
  auto sim_cfg = cfg.sim;
  sim_cfg.seed = cfg.sim.seed + replicate;
  auto windows = sim::make_windows(sim::simulate(sim_cfg), cfg.timesteps);
  TrainRequest req{v, cfg.timesteps, cfg.split, model_seed(sim_cfg.seed, v), cfg.train};
  req.train.seed = req.model_seed;
  auto out = train_variant(windows, req);
  ReplicateResult r;
  for (std::size_t j = 0; j < sim::kResponses; ++j) {
    std::vector<double> actual, pred;
    for (std::size_t i = 0; i < out.test.count; ++i) {
      actual.push_back(out.test.y_at(i, j));
      pred.push_back(out.predictions[i * out.test.targets + j]);
    }
    r.residuals[j] = spc::compute_residuals(actual, pred);
    r.arl[j] = spc::detect_and_arl(r.residuals[j], cfg.k_sigma).arl;
  }
  return r;
}

std::vector<io::ComparisonRow> aggregate(const std::vector<Variant>& variants,
                                         const std::vector<std::vector<ReplicateResult>>& results) {
  std::vector<io::ComparisonRow> rows;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    for (std::size_t j = 0; j < sim::kResponses; ++j) {
      std::vector<double> pooled, arls;
      for (const auto& rep : results[v]) {
        pooled.insert(pooled.end(), rep.residuals[j].begin(), rep.residuals[j].end());
        if (rep.arl[j]) arls.push_back(*rep.arl[j]);
      }
      io::ComparisonRow row;
      row.model = variants[v].label();
      row.response = response_name(j);
      row.mean_residual = mean_of(pooled);
      row.sd_residual = pooled.size() > 1 ? sd_of(pooled) : 0.0;
      if (!arls.empty()) row.mean_arl = mean_of(arls);
      if (arls.size() > 1) row.sd_arl = sd_of(arls);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<io::ComparisonRow> run_compare(const ExperimentConfig& cfg,
                                           const ProgressCallback& progress) {
  cfg.validate();
  auto variants = cfg.variants;
  std::sort(variants.begin(), variants.end(),
            [](const Variant& a, const Variant& b) { return variant_index(a) < variant_index(b); });

  std::size_t total = variants.size() * cfg.replicates;
  std::vector<std::vector<ReplicateResult>> results(variants.size(),
                                                    std::vector<ReplicateResult>(cfg.replicates));
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      std::size_t v = job % variants.size();
      std::size_t r = job / variants.size();
      try {
        auto res = run_job(cfg, r, variants[v]);
        std::lock_guard<std::mutex> lock(mu);
        results[v][r] = std::move(res);
        ++done;
        if (progress) progress(done, total);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };

  std::size_t threads = std::clamp<std::size_t>(cfg.threads, 1, total);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(variants, results);
}

}  // namespace copsurv::experiment
