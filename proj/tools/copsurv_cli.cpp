#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "copsurv/copsurv.h"

namespace {

struct Failure {
  std::string message;
};

void check(copsurv_status s) {
  if (s != COPSURV_OK) {
    std::string msg = copsurv_last_error();
    throw Failure{msg.empty() ? copsurv_status_name(s) : msg};
  }
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Flat key=value config: every key names a flag of the chosen subcommand
// without its leading dashes. Flags given on the command line win.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
  std::string path;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (path.empty() || out.empty()) return out;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(out.front());
  } catch (const CLI::OptionNotFound&) {
    return out;
  }

  std::ifstream in(path);
  if (!in) throw Failure{"cannot open config file " + path};
  std::set<std::string> given;
  for (const auto& a : out) {
    if (a.rfind("--", 0) != 0) continue;
    auto eq = a.find('=');
    given.insert(a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2));
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Failure{path + ":" + std::to_string(line_no) + ": expected key=value"};
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (given.count(key)) continue;
    const CLI::Option* opt = nullptr;
    try {
      opt = sub->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw Failure{path + ":" + std::to_string(line_no) + ": unknown key '" + key + "' for " +
                    sub->get_name()};
    }
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1") out.push_back("--" + key);
    } else {
      out.push_back("--" + key);
      out.push_back(value);
    }
  }
  return out;
}

void add_sim_flags(CLI::App* cmd, copsurv_sim_config& c) {
  cmd->add_option("--n", c.n, "number of subjects")->capture_default_str();
  cmd->add_option("--rho", c.rho, "dependence weight in [0,1]")->capture_default_str();
  cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
  cmd->add_option("--shape", c.shape, "Weibull shape")->capture_default_str();
  cmd->add_option("--scale", c.scale, "Weibull scale")->capture_default_str();
  cmd->add_option("--noise-sd", c.noise_sd, "noise SD for responses 2 and 3")->capture_default_str();
  cmd->add_option("--censor-rate", c.censor_rate, "exponential censoring rate")->capture_default_str();
  cmd->add_option("--binary-threshold", c.binary_threshold, "Y2 threshold")->capture_default_str();
  cmd->add_option("--cut-low", c.cut_low, "Y3 Low/Medium cut")->capture_default_str();
  cmd->add_option("--cut-high", c.cut_high, "Y3 Medium/High cut")->capture_default_str();
}

struct TrainStrings {
  std::string arch = "lstm";
  std::string activation = "clayton";
  std::string optimizer = "adam";
  std::string loss = "plain-mse";
  bool no_scale = false;
};

void add_train_flags(CLI::App* cmd, copsurv_train_config& c, TrainStrings& s, bool variant) {
  if (variant) {
    cmd->add_option("--arch", s.arch, "lstm | cnn-lstm")->capture_default_str();
    cmd->add_option("--activation", s.activation,
                    "clayton | gumbel | clayton-gumbel | relu | clayton-relu | sigmoid")
        ->capture_default_str();
  }
  cmd->add_option("--epochs", c.epochs, "training epochs")->capture_default_str();
  cmd->add_option("--lr", c.learning_rate, "learning rate")->capture_default_str();
  cmd->add_option("--batch", c.batch_size, "minibatch size")->capture_default_str();
  cmd->add_option("--timesteps", c.timesteps, "window length")->capture_default_str();
  cmd->add_option("--optimizer", s.optimizer, "adam | sgd")->capture_default_str();
  cmd->add_option("--loss", s.loss, "plain-mse | censor-hinge")->capture_default_str();
  cmd->add_option("--clip-norm", c.clip_norm, "gradient norm ceiling, 0 disables")
      ->capture_default_str();
  cmd->add_flag("--no-scale-target", s.no_scale, "train continuous heads on raw times");
  cmd->add_option("--split", c.split, "training fraction of windows")->capture_default_str();
}

void apply(copsurv_train_config& c, const TrainStrings& s) {
  c.architecture = s.arch.c_str();
  c.activation = s.activation.c_str();
  c.optimizer = s.optimizer.c_str();
  c.loss_mode = s.loss.c_str();
  c.scale_continuous = s.no_scale ? 0 : 1;
}

void print_summary(const copsurv_sim_summary& s) {
  std::printf("n: %zu\n", s.n);
  std::printf("censored_fraction: %.4f %.4f %.4f\n", s.censored_fraction[0],
              s.censored_fraction[1], s.censored_fraction[2]);
  std::printf("y2_rate: %.4f\n", s.y2_rate);
  std::printf("y3_freq: Low %.4f Medium %.4f High %.4f\n", s.y3_freq[0], s.y3_freq[1],
              s.y3_freq[2]);
  std::printf("corr_t1_t2: %.4f\n", s.corr_t1_t2);
}

struct DatasetGuard {
  copsurv_dataset* p = nullptr;
  ~DatasetGuard() { copsurv_dataset_free(p); }
};

struct ModelGuard {
  copsurv_model* p = nullptr;
  ~ModelGuard() { copsurv_model_free(p); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Copula-activated LSTM / CNN-LSTM survival experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", copsurv_version());
  app.add_option("--config")->description("key=value file of subcommand flags (flags override it)");

  // simulate
  copsurv_sim_config sim_cfg;
  copsurv_sim_config_default(&sim_cfg);
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "simulate a censored multi-response dataset");
  add_sim_flags(simulate, sim_cfg);
  simulate->add_option("--out", sim_out, "dataset CSV path")->required();

  // train
  copsurv_train_config train_cfg;
  copsurv_train_config_default(&train_cfg);
  TrainStrings train_s;
  std::string train_data, train_out;
  bool quiet = false;
  auto* train = app.add_subcommand("train", "train one model variant");
  train->add_option("--data", train_data, "simulated dataset CSV")->required();
  add_train_flags(train, train_cfg, train_s, true);
  train->add_option("--seed", train_cfg.seed, "model and training seed")->capture_default_str();
  train->add_option("--out", train_out, "output directory (model.json, predictions.csv)")
      ->required();
  train->add_flag("--quiet", quiet, "do not log per-epoch loss");

  // compare
  copsurv_compare_config cmp_cfg;
  copsurv_compare_config_default(&cmp_cfg);
  TrainStrings cmp_s;
  std::string cmp_out, cmp_variants = "all";
  auto* compare = app.add_subcommand("compare", "compare model variants over replicates");
  add_sim_flags(compare, cmp_cfg.sim);
  add_train_flags(compare, cmp_cfg.train, cmp_s, false);
  compare->add_option("--replicates", cmp_cfg.replicates, "replicate count")->capture_default_str();
  compare->add_option("--variants", cmp_variants, "arch:activation list or all")
      ->capture_default_str();
  compare->add_option("--sigma", cmp_cfg.sigma, "control limit multiplier")->capture_default_str();
  compare->add_option("--threads", cmp_cfg.threads, "worker threads")->capture_default_str();
  compare->add_option("--out", cmp_out, "comparison CSV path")->required();

  // chart
  std::string chart_preds, chart_out, chart_label;
  double chart_sigma = 2.0;
  bool chart_svg = false;
  auto* chart = app.add_subcommand("chart", "Shewhart residual charts from predictions");
  chart->add_option("--preds", chart_preds, "predictions CSV")->required();
  chart->add_option("--sigma", chart_sigma, "control limit multiplier")->capture_default_str();
  chart->add_option("--out", chart_out, "output directory")->required();
  chart->add_option("--label", chart_label, "chart file prefix (default: predictions file stem)");
  chart->add_flag("--svg", chart_svg, "also write SVG charts");

  // ingest
  std::string ingest_in, ingest_out;
  std::size_t ingest_t = 10;
  auto* ingest = app.add_subcommand("ingest", "clean and reshape a clinical CSV");
  ingest->add_option("--input", ingest_in, "clinical CSV")->required();
  ingest->add_option("--timesteps", ingest_t, "replicated time steps")->capture_default_str();
  ingest->add_option("--out", ingest_out, "output directory")->required();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args, app);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return 1;
  }

  try {
    if (*simulate) {
      DatasetGuard d;
      check(copsurv_simulate(&sim_cfg, &d.p));
      check(copsurv_dataset_write_csv(d.p, sim_out.c_str()));
      copsurv_sim_summary s;
      check(copsurv_dataset_summary(d.p, &s));
      print_summary(s);
      std::printf("wrote %s\n", sim_out.c_str());
    } else if (*train) {
      apply(train_cfg, train_s);
      DatasetGuard d;
      check(copsurv_dataset_read_csv(train_data.c_str(), &d.p));
      ModelGuard m;
      auto log = [](std::size_t epoch, double loss, void*) {
        std::printf("epoch %zu loss %.6f\n", epoch, loss);
        std::fflush(stdout);
      };
      check(copsurv_train(d.p, &train_cfg, quiet ? nullptr : +log, nullptr, &m.p));
      std::filesystem::create_directories(train_out);
      auto model_path = (std::filesystem::path(train_out) / "model.json").string();
      auto preds_path = (std::filesystem::path(train_out) / "predictions.csv").string();
      check(copsurv_model_save(m.p, model_path.c_str()));
      check(copsurv_model_write_predictions(m.p, preds_path.c_str()));
      for (int g = 0; g < 2; ++g) {
        double theta[16];
        std::size_t count = 0;
        check(copsurv_model_theta(m.p, g, theta, 16, &count));
        if (count == 0) continue;
        std::printf("theta_%s:", g ? "gumbel" : "clayton");
        for (std::size_t i = 0; i < count && i < 16; ++i) std::printf(" %.6f", theta[i]);
        std::printf("\n");
      }
      std::printf("parameters: %zu\nwrote %s\nwrote %s\n", copsurv_model_parameter_count(m.p),
                  model_path.c_str(), preds_path.c_str());
    } else if (*compare) {
      apply(cmp_cfg.train, cmp_s);
      cmp_cfg.variants = cmp_variants.c_str();
      auto progress = [](std::size_t done, std::size_t total, void*) {
        std::fprintf(stderr, "\rtrained %zu/%zu", done, total);
        if (done == total) std::fprintf(stderr, "\n");
      };
      std::size_t rows = 0;
      check(copsurv_compare(&cmp_cfg, cmp_out.c_str(), +progress, nullptr, &rows));
      std::printf("wrote %zu rows to %s\n", rows, cmp_out.c_str());
    } else if (*chart) {
      std::size_t n = 0;
      check(copsurv_chart_predictions(chart_preds.c_str(), chart_sigma, chart_out.c_str(),
                                      chart_label.c_str(), chart_svg ? 1 : 0, &n));
      std::printf("wrote %zu chart(s) to %s\n", n, chart_out.c_str());
    } else if (*ingest) {
      copsurv_ingest_result r;
      check(copsurv_ingest(ingest_in.c_str(), ingest_t, ingest_out.c_str(), &r));
      std::ifstream summary(std::filesystem::path(ingest_out) / "summary.txt");
      std::cout << summary.rdbuf();
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return 1;
  }
  return 0;
}
