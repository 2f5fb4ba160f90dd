#include "copsurv/copsurv.h"

#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "experiment/experiment.hpp"
#include "io/clinical.hpp"
#include "io/comparison.hpp"
#include "spc/control_chart.hpp"

using namespace copsurv;

struct copsurv_dataset {
  sim::SurvivalDataset data;
};

struct copsurv_model {
  nn::Model model;
  nn::TrainReport report;
  std::optional<WindowSet> test;
  std::vector<double> predictions;
};

namespace {

thread_local std::string g_last_error;

copsurv_status fail(copsurv_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
copsurv_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return COPSURV_OK;
  } catch (const ad::NonFiniteError& e) {
    return fail(COPSURV_ERR_NUMERIC, e.what());
  } catch (const std::domain_error& e) {
    return fail(COPSURV_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(COPSURV_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(COPSURV_ERR_INVALID_ARGUMENT, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(COPSURV_ERR_INVALID_ARGUMENT, std::string("malformed model document: ") + e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(COPSURV_ERR_IO, e.what());
  } catch (const std::runtime_error& e) {
    return fail(COPSURV_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(COPSURV_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(COPSURV_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " must not be null");
}

sim::SimConfig to_sim(const copsurv_sim_config& c) {
  sim::SimConfig s;
  s.n = c.n;
  s.shape = c.shape;
  s.scale = c.scale;
  s.rho = c.rho;
  s.noise_sd = c.noise_sd;
  s.censor_rate = c.censor_rate;
  s.binary_threshold = c.binary_threshold;
  s.cat_cuts = {c.cut_low, c.cut_high};
  s.seed = c.seed;
  s.validate();
  return s;
}

std::string str_or(const char* s, const char* fallback) { return s ? s : fallback; }

nn::TrainConfig to_train(const copsurv_train_config& c) {
  nn::TrainConfig t;
  t.learning_rate = c.learning_rate;
  t.epochs = c.epochs;
  t.batch_size = c.batch_size;
  t.optimizer = nn::optimizer_from_string(str_or(c.optimizer, "adam"));
  t.loss.continuous = metrics::continuous_mode_from_string(str_or(c.loss_mode, "plain-mse"));
  t.clip_norm = c.clip_norm;
  t.scale_continuous = c.scale_continuous != 0;
  t.seed = c.seed;
  t.validate();
  return t;
}

}  // namespace

extern "C" {

const char* copsurv_last_error(void) { return g_last_error.c_str(); }

const char* copsurv_status_name(copsurv_status status) {
  switch (status) {
    case COPSURV_OK: return "ok";
    case COPSURV_ERR_INVALID_ARGUMENT: return "invalid argument";
    case COPSURV_ERR_IO: return "i/o error";
    case COPSURV_ERR_DOMAIN: return "domain error";
    case COPSURV_ERR_NUMERIC: return "numeric error";
    case COPSURV_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* copsurv_version(void) { return "0.1.0"; }

void copsurv_sim_config_default(copsurv_sim_config* cfg) {
  if (!cfg) return;
  sim::SimConfig s;
  *cfg = {s.n,     s.shape,       s.scale,           s.rho,         s.noise_sd,
          s.censor_rate, s.binary_threshold, s.cat_cuts[0], s.cat_cuts[1], s.seed};
}

copsurv_status copsurv_simulate(const copsurv_sim_config* cfg, copsurv_dataset** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = new copsurv_dataset{sim::simulate(to_sim(*cfg))};
  });
}

copsurv_status copsurv_dataset_read_csv(const char* path, copsurv_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new copsurv_dataset{sim::read_dataset_csv(path)};
  });
}

copsurv_status copsurv_dataset_write_csv(const copsurv_dataset* data, const char* path) {
  return guarded([&] {
    require(data, "dataset");
    require(path, "path");
    sim::write_dataset_csv(data->data, path);
  });
}

copsurv_status copsurv_dataset_summary(const copsurv_dataset* data, copsurv_sim_summary* out) {
  return guarded([&] {
    require(data, "dataset");
    require(out, "out");
    if (data->data.size() == 0) throw std::invalid_argument("dataset is empty");
    auto s = sim::summarize(data->data);
    out->n = data->data.size();
    for (int j = 0; j < 3; ++j) {
      out->censored_fraction[j] = s.censored_fraction[j];
      out->y3_freq[j] = s.y3_freq[j];
    }
    out->y2_rate = s.y2_rate;
    out->corr_t1_t2 = s.corr_t1_t2;
  });
}

size_t copsurv_dataset_size(const copsurv_dataset* data) { return data ? data->data.size() : 0; }

void copsurv_dataset_free(copsurv_dataset* data) { delete data; }

void copsurv_train_config_default(copsurv_train_config* cfg) {
  if (!cfg) return;
  nn::TrainConfig t;
  cfg->architecture = "lstm";
  cfg->activation = "clayton";
  cfg->timesteps = 10;
  cfg->epochs = t.epochs;
  cfg->batch_size = t.batch_size;
  cfg->learning_rate = t.learning_rate;
  cfg->optimizer = "adam";
  cfg->loss_mode = "plain-mse";
  cfg->clip_norm = t.clip_norm;
  cfg->scale_continuous = t.scale_continuous ? 1 : 0;
  cfg->split = 0.8;
  cfg->seed = t.seed;
}

copsurv_status copsurv_train(const copsurv_dataset* data, const copsurv_train_config* cfg,
                             copsurv_epoch_callback on_epoch, void* user, copsurv_model** out) {
  return guarded([&] {
    require(data, "dataset");
    require(cfg, "config");
    require(out, "out");
    experiment::TrainRequest req;
    req.variant = {nn::architecture_from_string(str_or(cfg->architecture, "lstm")),
                   copula::activation_from_string(str_or(cfg->activation, "clayton"))};
    req.timesteps = cfg->timesteps;
    req.split = cfg->split;
    req.model_seed = cfg->seed;
    req.train = to_train(*cfg);
    auto windows = sim::make_windows(data->data, cfg->timesteps);
    nn::EpochCallback cb;
    if (on_epoch) cb = [&](std::size_t e, double l) { on_epoch(e, l, user); };
    auto res = experiment::train_variant(windows, req, cb);
    *out = new copsurv_model{std::move(res.model), std::move(res.report), std::move(res.test),
                             std::move(res.predictions)};
  });
}

copsurv_status copsurv_model_save(const copsurv_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    model->model.save(path);
  });
}

copsurv_status copsurv_model_load(const char* path, copsurv_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new copsurv_model{nn::Model::load(path), {}, std::nullopt, {}};
  });
}

void copsurv_model_free(copsurv_model* model) { delete model; }

size_t copsurv_model_parameter_count(const copsurv_model* model) {
  return model ? model->model.parameter_count() : 0;
}

size_t copsurv_model_epoch_losses(const copsurv_model* model, double* losses, size_t cap) {
  if (!model) return 0;
  const auto& l = model->report.epoch_loss;
  for (size_t i = 0; losses && i < l.size() && i < cap; ++i) losses[i] = l[i];
  return l.size();
}

copsurv_status copsurv_model_write_predictions(const copsurv_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    if (!model->test) throw std::invalid_argument("model carries no held-out predictions");
    experiment::write_predictions_csv(
        experiment::prediction_rows(*model->test, model->predictions), path);
  });
}

copsurv_status copsurv_model_theta(const copsurv_model* model, int gumbel, double* theta,
                                   size_t cap, size_t* count) {
  return guarded([&] {
    require(model, "model");
    const auto& cp = model->model.copula();
    auto values = gumbel ? cp.theta_gumbel() : cp.theta_clayton();
    for (size_t i = 0; theta && i < values.size() && i < cap; ++i) theta[i] = values[i];
    if (count) *count = values.size();
  });
}

void copsurv_compare_config_default(copsurv_compare_config* cfg) {
  if (!cfg) return;
  copsurv_sim_config_default(&cfg->sim);
  copsurv_train_config_default(&cfg->train);
  cfg->replicates = 30;
  cfg->variants = nullptr;
  cfg->sigma = 2.0;
  cfg->threads = 1;
}

copsurv_status copsurv_compare(const copsurv_compare_config* cfg, const char* out_path,
                               copsurv_progress_callback progress, void* user, size_t* rows) {
  return guarded([&] {
    require(cfg, "config");
    require(out_path, "out path");
    experiment::ExperimentConfig ec;
    ec.sim = to_sim(cfg->sim);
    ec.train = to_train(cfg->train);
    ec.timesteps = cfg->train.timesteps;
    ec.split = cfg->train.split;
    ec.replicates = cfg->replicates;
    ec.variants = experiment::parse_variants(cfg->variants ? cfg->variants : "");
    ec.k_sigma = cfg->sigma;
    ec.threads = cfg->threads;
    experiment::ProgressCallback cb;
    if (progress) cb = [&](std::size_t d, std::size_t t) { progress(d, t, user); };
    auto table = experiment::run_compare(ec, cb);
    io::write_table_csv(table, out_path);
    if (rows) *rows = table.size();
  });
}

copsurv_status copsurv_chart_residuals(const double* residuals, size_t n, double sigma,
                                       copsurv_chart_stats* out) {
  return guarded([&] {
    require(residuals, "residuals");
    require(out, "out");
    auto r = spc::detect_and_arl(std::span<const double>(residuals, n), sigma);
    *out = {n, r.center, r.sigma, r.lcl, r.ucl, r.signal_count(), r.arl ? 1 : 0, r.arl.value_or(0.0)};
  });
}

copsurv_status copsurv_chart_predictions(const char* preds_path, double sigma, const char* out_dir,
                                         const char* label, int svg, size_t* charts) {
  return guarded([&] {
    require(preds_path, "predictions path");
    require(out_dir, "output directory");
    auto rows = experiment::read_predictions_csv(preds_path);
    if (rows.empty()) throw std::invalid_argument(std::string(preds_path) + ": no prediction rows");
    std::string name = label && *label ? label : std::filesystem::path(preds_path).stem().string();
    std::vector<std::string> order;
    std::map<std::string, std::vector<const experiment::PredictionRow*>> groups;
    for (const auto& r : rows) {
      if (!groups.count(r.response)) order.push_back(r.response);
      groups[r.response].push_back(&r);
    }
    std::filesystem::create_directories(out_dir);
    for (const auto& resp : order) {
      std::vector<double> actual, pred;
      for (const auto* r : groups[resp]) {
        actual.push_back(r->actual);
        pred.push_back(r->predicted);
      }
      auto report = spc::detect_and_arl(spc::compute_residuals(actual, pred), sigma);
      auto base = std::filesystem::path(out_dir) / (name + "_" + resp);
      spc::write_chart_csv(report, base.string() + ".csv");
      if (svg) spc::write_chart_svg(report, name + " " + resp, base.string() + ".svg");
    }
    if (charts) *charts = order.size();
  });
}

copsurv_status copsurv_ingest(const char* input_path, size_t timesteps, const char* out_dir,
                              copsurv_ingest_result* out) {
  return guarded([&] {
    require(input_path, "input path");
    require(out_dir, "output directory");
    auto data = io::load_clinical_csv(input_path);
    auto p = io::preprocess(data, timesteps);
    std::filesystem::create_directories(out_dir);
    auto dir = std::filesystem::path(out_dir);
    io::write_processed_csv(p, (dir / "processed.csv").string());
    std::ofstream summary(dir / "summary.txt", std::ios::binary);
    if (!summary) throw std::runtime_error("cannot write " + (dir / "summary.txt").string());
    summary << io::format_summary(data.summary);
    summary << "shape: (" << p.n << ", " << p.timesteps << ", " << p.features << ")\n";
    summary << "features:";
    for (const auto& f : p.feature_names) summary << ' ' << f;
    summary << '\n';
    if (!p.dropped.empty()) {
      summary << "dropped_zero_variance:";
      for (const auto& f : p.dropped) summary << ' ' << f;
      summary << '\n';
    }
    if (!summary) throw std::runtime_error("failed writing summary.txt");
    if (out) *out = {data.summary.rows_read, p.n, p.timesteps, p.features};
  });
}

}  // extern "C"
