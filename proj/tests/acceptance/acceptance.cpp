#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "autodiff/gradcheck.hpp"
#include "autodiff/ops.hpp"
#include "copula/activations.hpp"
#include "copula/copula.hpp"
#include "experiment/experiment.hpp"
#include "io/comparison.hpp"
#include "io/csv.hpp"
#include "metrics/losses.hpp"
#include "nn/layers.hpp"
#include "nn/model.hpp"
#include "nn/train.hpp"
#include "sim/simulate.hpp"
#include "spc/control_chart.hpp"

namespace fs = std::filesystem;
using namespace copsurv;
using ad::Tensor;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::vector<double> uniform(std::size_t n, double lo, double hi, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(gen);
  return v;
}

Tensor random_leaf(ad::Shape shape, double lo, double hi, std::mt19937_64& gen) {
  auto n = ad::shape_size(shape);
  return Tensor::from(std::move(shape), uniform(n, lo, hi, gen), true);
}

nn::Sequence random_sequence(std::size_t steps, std::size_t batch, std::size_t d,
                             std::mt19937_64& gen) {
  nn::Sequence s;
  for (std::size_t t = 0; t < steps; ++t) s.push_back(random_leaf({batch, d}, -2, 2, gen));
  return s;
}

std::size_t coordinates(const std::vector<Tensor>& ps) {
  std::size_t n = 0;
  for (const auto& p : ps) n += p.size();
  return n;
}

Tensor sum_sequence(const nn::Sequence& s, const Tensor& weight) {
  Tensor acc = ad::sum(ad::mul(ad::tanh(s[0]), weight));
  for (std::size_t t = 1; t < s.size(); ++t) acc = ad::add(acc, ad::sum(ad::mul(ad::tanh(s[t]), weight)));
  return acc;
}

// Repeats `one` (which returns worst error and coordinates checked) until at
// least 100 coordinates have been compared.
double repeat_check(const std::function<std::pair<double, std::size_t>()>& one) {
  double worst = 0.0;
  std::size_t seen = 0;
  while (seen < 100) {
    auto [err, n] = one();
    worst = std::max(worst, err);
    seen += n;
  }
  return worst;
}

Outcome criterion_gradients() {
  auto t0 = Clock::now();
  std::mt19937_64 gen(101);
  Outcome out;
  std::ostringstream detail;
  double worst_tight = 0.0, worst_e2e = 0.0;
  auto record = [&](const std::string& name, double err, double tol) {
    (tol < 1e-3 ? worst_tight : worst_e2e) = std::max(tol < 1e-3 ? worst_tight : worst_e2e, err);
    if (!(err < tol)) {
      out.pass = false;
      detail << name << " " << err << " ";
    }
  };

  std::uniform_real_distribution<double> dx(-3.0, 3.0), dphi(-1.0, 1.5);
  for (auto act : copula::all_activations()) {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      double x = dx(gen);
      if (std::abs(x) < 1e-3) x += 0.01;
      auto params = copula::CopulaParams::initial(act, 1);
      for (auto& p : params.trainable()) p.mutable_data()[0] = dphi(gen);
      auto pre = Tensor::matrix(1, 1, {x}, true);
      auto leaves = params.trainable();
      leaves.push_back(pre);
      auto loss = [&] { return ad::sum(copula::apply_activation(pre, params)); };
      worst = std::max(worst, ad::finite_diff_check_params(loss, leaves, 1e-5));
    }
    record(std::string(copula::to_string(act)), worst, 1e-4);
  }

  record("dense", repeat_check([&] {
           auto x = random_leaf({3, 4}, -2, 2, gen);
           auto w = random_leaf({2, 4}, -1, 1, gen);
           auto b = random_leaf({2}, -1, 1, gen);
           auto loss = [&] { return ad::sum(ad::tanh(nn::dense_forward(x, w, b))); };
           return std::pair{ad::finite_diff_check_params(loss, {x, w, b}, 1e-5), coordinates({x, w, b})};
         }),
         1e-4);

  record("conv1d", repeat_check([&] {
           auto x = random_sequence(6, 2, 2, gen);
           nn::ConvWeights w{random_leaf({3, 6}, -1, 1, gen), random_leaf({3}, 0.2, 1, gen), 3};
           auto weight = Tensor::from({2, 3}, uniform(6, -1, 1, gen));
           auto loss = [&] { return sum_sequence(nn::conv1d_forward(x, w), weight); };
           std::vector<Tensor> ps{w.kernel, w.bias};
           ps.insert(ps.end(), x.begin(), x.end());
           return std::pair{ad::finite_diff_check_params(loss, ps, 1e-5), coordinates(ps)};
         }),
         1e-4);

  record("maxpool", repeat_check([&] {
           auto x = random_sequence(6, 3, 2, gen);
           auto weight = Tensor::from({3, 2}, uniform(6, -1, 1, gen));
           auto loss = [&] { return sum_sequence(nn::maxpool1d(x), weight); };
           return std::pair{ad::finite_diff_check_params(loss, x, 1e-5), coordinates(x)};
         }),
         1e-4);

  record("lstm", repeat_check([&] {
           nn::LstmWeights w;
           for (auto* m : {&w.w_f, &w.w_i, &w.w_c, &w.w_o}) *m = random_leaf({3, 2}, -0.8, 0.8, gen);
           for (auto* m : {&w.u_f, &w.u_i, &w.u_c, &w.u_o}) *m = random_leaf({3, 3}, -0.8, 0.8, gen);
           for (auto* m : {&w.b_f, &w.b_i, &w.b_c, &w.b_o}) *m = random_leaf({3}, -0.5, 0.5, gen);
           auto x = random_sequence(5, 2, 2, gen);
           auto weight = Tensor::from({2, 3}, uniform(6, -1, 1, gen));
           auto loss = [&] { return sum_sequence(nn::lstm_layer_forward(x, w), weight); };
           auto ps = w.parameters();
           ps.insert(ps.end(), x.begin(), x.end());
           return std::pair{ad::finite_diff_check_params(loss, ps, 1e-5), coordinates(ps)};
         }),
         1e-4);

  record("batchnorm", repeat_check([&] {
           auto bn = nn::BatchNorm::create(3);
           bn.gamma = random_leaf({3}, 0.5, 1.5, gen);
           bn.beta = random_leaf({3}, -0.5, 0.5, gen);
           auto x = random_leaf({6, 3}, -2, 2, gen);
           auto weight = Tensor::from({6, 3}, uniform(18, -1, 1, gen));
           auto loss = [&] {
             return ad::sum(ad::mul(ad::tanh(nn::batchnorm_forward(x, bn, nn::Mode::train)), weight));
           };
           return std::pair{ad::finite_diff_check_params(loss, {x, bn.gamma, bn.beta}, 1e-5),
                            coordinates({x, bn.gamma, bn.beta})};
         }),
         1e-4);

  record("dropout", repeat_check([&] {
           auto x = random_leaf({5, 4}, -2, 2, gen);
           auto seed = gen();
           auto loss = [&] {
             Rng rng(seed);
             return ad::sum(ad::tanh(nn::dropout_forward(x, 0.3, nn::Mode::train, rng)));
           };
           return std::pair{ad::finite_diff_check_params(loss, {x}, 1e-5), x.size()};
         }),
         1e-4);

  std::vector<metrics::HeadKind> heads{metrics::HeadKind::continuous, metrics::HeadKind::binary,
                                       metrics::HeadKind::ordinal};
  for (auto arch : {nn::Architecture::lstm, nn::Architecture::cnn_lstm}) {
    for (auto act : copula::all_activations()) {
      nn::ModelSpec spec;
      spec.architecture = arch;
      spec.variant = act;
      spec.timesteps = arch == nn::Architecture::lstm ? 4 : 10;
      spec.features = 2;
      spec.hidden = 3;
      spec.conv_channels = {2, 3};
      spec.dropout = 0.0;
      auto model = nn::Model::build(spec, gen());
      auto x = random_sequence(spec.timesteps, 3, 2, gen);
      auto target = Tensor::matrix(3, 3, {0.4, 0, 1, 0.9, 1, 2, 0.2, 0, 0});
      auto delta = Tensor::full({3, 3}, 1.0);
      auto loss = [&] {
        Rng rng(0);
        return metrics::multi_task_loss(model.forward(x, nn::Mode::train, rng), target, delta, heads,
                                        {});
      };
      auto params = model.parameters();
      double err = ad::finite_diff_check_params(loss, params, 1e-5);
      if (coordinates(params) < 100) err = 1.0;
      record(spec.label() + " end-to-end", err, 1e-3);
    }
  }
  double secs = seconds_since(t0);
  if (secs >= 60.0) out.pass = false;
  out.detail = detail.str() + "activations/layers max rel err " + fmt("%.1e", worst_tight) +
               ", end-to-end " + fmt("%.1e", worst_e2e) + " (" + fmt("%.1fs", secs) + ")";
  return out;
}

Outcome criterion_activation_values() {
  Outcome out;
  double c = copula::clayton_activation(Tensor::scalar(0.0), 1.0).item();
  double g = copula::gumbel_activation(Tensor::scalar(0.0), 2.0).item();
  double worst_phi = 0.0;
  for (int i = 0; i <= 20; ++i) {
    double x = -5.0 + 0.5 * i;
    double a = copula::gumbel_activation(Tensor::scalar(x), 1.0).item();
    double b = copula::gauss_cdf(Tensor::scalar(x)).item();
    worst_phi = std::max(worst_phi, std::abs(a - b));
  }
  out.pass = std::abs(c - 1.0) < 1e-5 && std::abs(g - 0.61850) < 1e-5 &&
             std::abs(g - std::exp(-std::log(2.0) * std::log(2.0))) < 1e-12 && worst_phi < 1e-12;
  out.detail = "clayton(0,1)=" + fmt("%.8f", c) + " gumbel(0,2)=" + fmt("%.8f", g) +
               " max|gumbel(.,1)-Phi|=" + fmt("%.1e", worst_phi);
  return out;
}

Outcome criterion_copula_validity() {
  Outcome out;
  using copula::CopulaFamily;
  double boundary = 0.0, increment = 0.0;
  std::vector<double> grid(21);
  for (int i = 0; i <= 20; ++i) grid[i] = i / 20.0;
  auto check_family = [&](CopulaFamily fam, std::initializer_list<double> thetas) {
    for (double th : thetas) {
      for (double u : grid) {
        boundary = std::max(boundary, std::abs(copula::copula_cdf(u, 0.0, th, fam)));
        boundary = std::max(boundary, std::abs(copula::copula_cdf(0.0, u, th, fam)));
        boundary = std::max(boundary, std::abs(copula::copula_cdf(u, 1.0, th, fam) - u));
        boundary = std::max(boundary, std::abs(copula::copula_cdf(1.0, u, th, fam) - u));
      }
      for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
          double v = copula::copula_cdf(grid[i + 1], grid[j + 1], th, fam) -
                     copula::copula_cdf(grid[i + 1], grid[j], th, fam) -
                     copula::copula_cdf(grid[i], grid[j + 1], th, fam) +
                     copula::copula_cdf(grid[i], grid[j], th, fam);
          increment = std::min(increment, v);
        }
      }
    }
  };
  check_family(CopulaFamily::clayton, {0.5, 1.0, 2.0, 5.0});
  check_family(CopulaFamily::gumbel, {1.0, 1.5, 3.0});
  double indep = 0.0;
  for (double u : grid)
    for (double v : grid)
      indep = std::max(indep, std::abs(copula::copula_cdf(u, v, 1e-6, CopulaFamily::clayton) - u * v));
  out.pass = boundary <= 1e-12 && increment >= -1e-12 && indep <= 1e-4;
  out.detail = "boundary " + fmt("%.1e", boundary) + " min increment " + fmt("%.1e", increment) +
               " independence " + fmt("%.1e", indep);
  return out;
}

Outcome criterion_arl() {
  auto t0 = Clock::now();
  Rng rng(2026);
  std::vector<double> r(100000);
  for (auto& v : r) v = rng.normal();
  auto rep = spc::detect_and_arl(r, 2.0);
  double secs = seconds_since(t0);
  Outcome out;
  out.pass = rep.arl && *rep.arl >= 20.5 && *rep.arl <= 23.5 && secs < 5.0;
  out.detail = "ARL " + (rep.arl ? fmt("%.4f", *rep.arl) : std::string("NA")) + " (" +
               fmt("%.2fs", secs) + ")";
  return out;
}

// Lanczos approximation, independent of std::tgamma.
double lanczos_gamma(double z) {
  static const double c[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  double x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + i);
  double t = z + 7.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

Outcome criterion_simulator() {
  // Monte-Carlo oracles (numpy, 4e6 draws) frozen before the simulator was written.
  const double corr_oracle = 0.99288, censored_oracle = 0.15909;
  const double y3_oracle[3] = {0.7026, 0.2897, 0.0077};

  auto t0 = Clock::now();
  Rng rng(77);
  double sum = 0.0;
  for (int i = 0; i < 1000000; ++i) sum += sim::sample_weibull(1.5, 2.0, rng);
  double mean = sum / 1e6;
  double target = 2.0 * lanczos_gamma(5.0 / 3.0);

  sim::SimConfig cfg;
  cfg.n = 1000000;
  cfg.seed = 2024;
  auto s = sim::summarize(sim::simulate(cfg));
  double secs = seconds_since(t0);

  Outcome out;
  out.pass = std::abs(mean - target) < 0.01 && std::abs(s.corr_t1_t2 - corr_oracle) < 0.01 &&
             std::abs(s.censored_fraction[0] - censored_oracle) < 0.005 && secs < 60.0;
  for (int k = 0; k < 3; ++k) out.pass = out.pass && std::abs(s.y3_freq[k] - y3_oracle[k]) < 0.005;
  out.detail = "weibull mean " + fmt("%.4f", mean) + " (oracle " + fmt("%.4f", target) + ") corr " +
               fmt("%.5f", s.corr_t1_t2) + " censored " + fmt("%.5f", s.censored_fraction[0]) +
               " Y3 " + fmt("%.4f", s.y3_freq[0]) + "/" + fmt("%.4f", s.y3_freq[1]) + "/" +
               fmt("%.4f", s.y3_freq[2]) + " (" + fmt("%.1fs", secs) + ")";
  return out;
}

Outcome criterion_training() {
  auto t0 = Clock::now();
  sim::SimConfig cfg;
  cfg.n = 500;
  cfg.seed = 42;
  auto windows = sim::make_windows(sim::simulate(cfg), 10);
  Outcome out;
  std::ostringstream detail;
  double worst = 0.0;
  for (const auto& v : experiment::all_variants()) {
    experiment::TrainRequest req;
    req.variant = v;
    req.train.epochs = 30;
    auto res = experiment::train_variant(windows, req);
    double ratio = res.report.final_loss() / res.report.first_loss();
    bool ok = std::isfinite(ratio) && ratio < 0.5;
    worst = std::max(worst, ratio);
    const auto& cp = res.model.copula();
    auto moved = [](const std::vector<double>& th, double init) {
      bool all = !th.empty();
      for (double t : th) all = all && std::abs(t - init) > 1e-4;
      return all;
    };
    if (copula::uses_clayton(v.activation)) ok = ok && moved(cp.theta_clayton(), copula::kInitialThetaClayton);
    if (copula::uses_gumbel(v.activation)) ok = ok && moved(cp.theta_gumbel(), copula::kInitialThetaGumbel);
    if (!ok) {
      out.pass = false;
      detail << v.label() << " ratio " << ratio << "; ";
    }
  }
  double secs = seconds_since(t0);
  if (secs >= 600.0) out.pass = false;
  out.detail = detail.str() + "worst loss ratio " + fmt("%.3f", worst) + " (" + fmt("%.1fs", secs) + ")";
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  std::string cmd = std::string("\"") + COPSURV_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome criterion_compare_schema(const fs::path& work) {
  auto t0 = Clock::now();
  auto path = work / "compare.csv";
  Outcome out;
  if (run("compare --n 200 --seed 42 --replicates 3 --epochs 3 --threads 2 --out \"" + path.string() +
          "\"") != 0) {
    return {false, "compare command failed"};
  }
  auto text = slurp(path);
  auto first = text.substr(0, text.find('\n'));
  auto rows = io::read_table_csv(path.string());
  bool ok = first == io::kComparisonHeader && rows.size() == 36;
  std::size_t na = 0;
  for (std::size_t i = 0; ok && i < rows.size(); ++i) {
    const auto& r = rows[i];
    ok = r.model == experiment::all_variants()[i / 3].label() &&
         r.response == experiment::response_name(i % 3) && r.sd_residual > 0.0;
    if (r.mean_arl) ok = ok && *r.mean_arl >= 1.0;
    if (r.sd_arl) ok = ok && r.mean_arl.has_value() && *r.sd_arl >= 0.0;
    if (!r.mean_arl) {
      ++na;
      ok = ok && !r.sd_arl;
    }
  }
  // NA must be spelled exactly in both ARL columns
  for (std::size_t pos = text.find("NA"); pos != std::string::npos; pos = text.find("NA", pos + 2)) {
    ok = ok && (text.compare(pos, 6, "NA,NA\n") == 0 || text.compare(pos - 1, 4, ",NA\n") == 0);
  }
  out.pass = ok;
  out.detail = "header ok, " + std::to_string(rows.size()) + " rows, " + std::to_string(na) +
               " NA ARL rows (" + fmt("%.1fs", seconds_since(t0)) + ")";
  if (first != io::kComparisonHeader) out.detail = "bad header: " + first;
  return out;
}

std::map<std::string, std::string> read_summary(const fs::path& p) {
  std::map<std::string, std::string> kv;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    auto c = line.find(':');
    if (c != std::string::npos) kv[line.substr(0, c)] = line.substr(c + 1 + (c + 1 < line.size()));
  }
  return kv;
}

Outcome criterion_ingestion(const fs::path& work) {
  const char* env = std::getenv("COPSURV_METABRIC_CSV");
  bool real = env && fs::exists(env);
  fs::path input = real ? fs::path(env) : fs::path(COPSURV_FIXTURE_DIR) / "metabric_sample.csv";
  auto dir = work / "ingest";
  if (run("ingest --input \"" + input.string() + "\" --timesteps 10 --out \"" + dir.string() + "\"") != 0) {
    return {false, "ingest command failed on " + input.string()};
  }
  auto kv = read_summary(dir / "summary.txt");
  auto table = io::read_csv((dir / "processed.csv").string());
  std::size_t d = table.header.size() - 4;
  std::size_t n = std::stoul(kv["n"]);

  // independent recomputation from the raw file
  auto raw = io::read_csv(input.string());
  std::vector<std::string> cols{"overall_survival_months", "overall_survival", "age_at_diagnosis",
                                "tumor_stage",             "er_status",        "her2_status"};
  std::vector<double> times;
  std::map<std::string, std::size_t> stages;
  for (const auto& row : raw.rows) {
    bool missing = false;
    for (const auto& c : cols) {
      const auto& v = row[raw.column(c)];
      missing |= v.empty() || v == "NA" || v == "nan" || v == "NaN";
    }
    if (missing) continue;
    times.push_back(std::stod(row[raw.column("overall_survival_months")]));
    stages[std::to_string(std::lround(std::stod(row[raw.column("tumor_stage")])))]++;
  }
  double mean = 0.0, ss = 0.0;
  for (double t : times) mean += t;
  mean /= times.size();
  for (double t : times) ss += (t - mean) * (t - mean);
  double sd = std::sqrt(ss / (times.size() - 1));
  std::string stage_line;
  for (const auto& [s, c] : stages) stage_line += (stage_line.empty() ? "" : " ") + s + "=" + std::to_string(c);

  std::string shape = "(" + std::to_string(n) + ", 10, " + std::to_string(d) + ")";
  bool ok = n == times.size() && kv["shape"] == shape && table.rows.size() == n * 10 &&
            kv["tumor_stage_counts"] == stage_line &&
            kv["survival_time"].find("mean " + io::format_fixed(mean, 1) + " sd " + io::format_fixed(sd, 1)) == 0;
  // standardized feature columns
  for (std::size_t f = 2; ok && f < 2 + d; ++f) {
    double m = 0.0, s2 = 0.0;
    std::vector<double> col;
    for (const auto& row : table.rows)
      if (row[1] == "0") col.push_back(std::stod(row[f]));
    for (double v : col) m += v;
    m /= col.size();
    for (double v : col) s2 += (v - m) * (v - m);
    ok = std::abs(m) < 1e-9 && std::abs(std::sqrt(s2 / (col.size() - 1)) - 1.0) < 1e-9;
  }
  if (real) {
    ok = ok && n == 1310 && std::abs(mean - 127.7) <= 0.1 && std::abs(sd - 78.5) <= 0.1 &&
         stage_line == "1=442 2=752 3=108 4=8";
  }
  return {ok, std::string(real ? "METABRIC" : "fixture") + " n=" + std::to_string(n) + " shape " +
                  kv["shape"] + " stages " + stage_line + " survival mean " + fmt("%.2f", mean) +
                  " sd " + fmt("%.2f", sd)};
}

Outcome criterion_determinism(const fs::path& work) {
  auto p = [&](const char* name) { return "\"" + (work / name).string() + "\""; };
  bool ok = true;
  ok &= run("simulate --n 300 --seed 9 --out " + p("sim_a.csv")) == 0;
  ok &= run("simulate --n 300 --seed 9 --out " + p("sim_b.csv")) == 0;
  ok &= run("train --data " + p("sim_a.csv") + " --arch cnn-lstm --activation clayton-gumbel --epochs 3 --seed 5 --quiet --out " + p("train_a")) == 0;
  ok &= run("train --data " + p("sim_b.csv") + " --arch cnn-lstm --activation clayton-gumbel --epochs 3 --seed 5 --quiet --out " + p("train_b")) == 0;
  std::string cmp = "compare --n 150 --seed 3 --replicates 3 --epochs 2 --variants cnn-lstm:clayton,cnn-lstm:sigmoid,lstm:relu";
  ok &= run(cmp + " --threads 1 --out " + p("cmp_serial_a.csv")) == 0;
  ok &= run(cmp + " --threads 1 --out " + p("cmp_serial_b.csv")) == 0;
  ok &= run(cmp + " --threads 4 --out " + p("cmp_parallel.csv")) == 0;
  if (!ok) return {false, "a command failed"};

  bool sim_same = slurp(work / "sim_a.csv") == slurp(work / "sim_b.csv");
  bool train_same = slurp(work / "train_a" / "predictions.csv") == slurp(work / "train_b" / "predictions.csv") &&
                    slurp(work / "train_a" / "model.json") == slurp(work / "train_b" / "model.json");
  auto serial = slurp(work / "cmp_serial_a.csv");
  bool cmp_same = serial == slurp(work / "cmp_serial_b.csv");
  bool par_same = serial == slurp(work / "cmp_parallel.csv");
  bool nonempty = serial.size() > std::string(io::kComparisonHeader).size() + 1;
  Outcome out{sim_same && train_same && cmp_same && par_same && nonempty, ""};
  out.detail = std::string("simulate ") + (sim_same ? "identical" : "DIFFERS") + ", train " +
               (train_same ? "identical" : "DIFFERS") + ", compare " + (cmp_same ? "identical" : "DIFFERS") +
               ", parallel vs serial " + (par_same ? "identical" : "DIFFERS");
  return out;
}

}  // namespace

int main() {
  auto work = fs::temp_directory_path() / ("copsurv_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(work);

  struct Item {
    int id;
    const char* name;
    std::function<Outcome()> fn;
  };
  std::vector<Item> items{
      {1, "gradient correctness", criterion_gradients},
      {2, "closed-form activation values", criterion_activation_values},
      {3, "copula validity", criterion_copula_validity},
      {4, "ARL of normal residuals", criterion_arl},
      {5, "simulator fidelity", criterion_simulator},
      {6, "training sanity", criterion_training},
      {7, "comparison table schema", [&] { return criterion_compare_schema(work); }},
      {8, "clinical ingestion", [&] { return criterion_ingestion(work); }},
      {9, "determinism", [&] { return criterion_determinism(work); }},
  };
  int failed = 0;
  for (const auto& it : items) {
    Outcome o;
    try {
      o = it.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %d %s: %s (%s)\n", it.id, it.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(work);
  return failed == 0 ? 0 : 1;
}
