#include "sim/simulate.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "io/csv.hpp"

namespace copsurv::sim {

namespace {

constexpr std::uint64_t kEventStream = 0;
constexpr std::uint64_t kCensorStream = 1;

void column_moments(const std::vector<double>& v, double& mean, double& sd) {
  double n = static_cast<double>(v.size());
  mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

}  // namespace

void SimConfig::validate() const {
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  if (!(shape > 0.0) || !(scale > 0.0)) throw std::invalid_argument("Weibull parameters must be > 0");
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0,1]");
  if (!(noise_sd >= 0.0)) throw std::invalid_argument("noise_sd must be >= 0");
  if (!(censor_rate > 0.0)) throw std::invalid_argument("censor_rate must be > 0");
  if (!(cat_cuts[0] > 0.0 && cat_cuts[0] < cat_cuts[1])) {
    throw std::invalid_argument("category cuts must be positive and strictly increasing");
  }
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::low: return "Low";
    case Category::medium: return "Medium";
    case Category::high: return "High";
  }
  return "?";
}

double weibull_from_uniform(double u, double shape, double scale) {
  return scale * std::pow(-std::log(u), 1.0 / shape);
}

double sample_weibull(double shape, double scale, Rng& rng) {
  return weibull_from_uniform(rng.uniform(), shape, scale);
}

double dependent_time(double t1, double w, double noise, double rho) {
  return rho * t1 + (1.0 - rho) * (w + noise);
}

Times generate_marginals(const SimConfig& cfg) {
  cfg.validate();
  Times t;
  for (auto& col : t) col.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    Rng r1 = Rng::substream(cfg.seed, i, 1, kEventStream);
    double t1 = sample_weibull(cfg.shape, cfg.scale, r1);
    t[0][i] = t1;
    for (std::size_t j = 1; j < kResponses; ++j) {
      Rng rj = Rng::substream(cfg.seed, i, j + 1, kEventStream);
      double tj = 0.0;
      do {
        double w = sample_weibull(cfg.shape, cfg.scale, rj);
        double noise = rj.normal(0.0, cfg.noise_sd);
        tj = dependent_time(t1, w, noise, cfg.rho);
      } while (!(tj > 0.0));
      t[j][i] = tj;
    }
  }
  return t;
}

void censor_one(double t, double c, double& observed, int& delta) {
  delta = t <= c ? 1 : 0;
  observed = delta ? t : c;
}

CensoredTimes apply_censoring(const Times& times, const SimConfig& cfg, Times* censor_out) {
  CensoredTimes out;
  for (std::size_t j = 0; j < kResponses; ++j) {
    std::size_t n = times[j].size();
    out.observed[j].resize(n);
    out.delta[j].resize(n);
    if (censor_out) (*censor_out)[j].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(times[j][i] > 0.0)) throw std::invalid_argument("event times must be positive");
      Rng r = Rng::substream(cfg.seed, i, j + 1, kCensorStream);
      double c = -std::log(r.uniform()) / cfg.censor_rate;
      if (censor_out) (*censor_out)[j][i] = c;
      censor_one(times[j][i], c, out.observed[j][i], out.delta[j][i]);
    }
  }
  return out;
}

int binary_label(double observed, const SimConfig& cfg) {
  if (!(observed > 0.0)) throw std::invalid_argument("observed time must be positive");
  return observed > cfg.binary_threshold ? 1 : 0;
}

Category category_label(double observed, const SimConfig& cfg) {
  if (!(observed > 0.0)) throw std::invalid_argument("observed time must be positive");
  if (observed <= cfg.cat_cuts[0]) return Category::low;
  if (observed <= cfg.cat_cuts[1]) return Category::medium;
  return Category::high;
}

SurvivalDataset simulate(const SimConfig& cfg) {
  SurvivalDataset d;
  d.true_time = generate_marginals(cfg);
  auto cens = apply_censoring(d.true_time, cfg, &d.censor_time);
  d.observed = std::move(cens.observed);
  d.delta = std::move(cens.delta);
  d.y2.resize(cfg.n);
  d.y3.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    d.y2[i] = binary_label(d.observed[1][i], cfg);
    d.y3[i] = category_label(d.observed[2][i], cfg);
  }
  return d;
}

WindowSet make_windows(const SurvivalDataset& data, std::size_t timesteps, bool standardize) {
  std::size_t n = data.size();
  if (timesteps == 0) throw std::invalid_argument("timesteps must be >= 1");
  if (n <= timesteps) {
    throw std::invalid_argument("need more subjects (" + std::to_string(n) + ") than timesteps (" +
                                std::to_string(timesteps) + ")");
  }
  std::array<std::vector<double>, 3> cols;
  for (auto& c : cols) c.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cols[0][i] = data.observed[0][i];
    cols[1][i] = data.y2[i];
    cols[2][i] = static_cast<double>(data.y3[i]);
  }
  std::array<std::vector<double>, 3> feats = cols;
  if (standardize) {
    for (auto& c : feats) {
      double mean = 0.0, sd = 0.0;
      column_moments(c, mean, sd);
      for (auto& v : c) v = sd > 0.0 ? (v - mean) / sd : 0.0;
    }
  }

  WindowSet w;
  w.count = n - timesteps;
  w.timesteps = timesteps;
  w.features = 3;
  w.targets = 3;
  w.x.reserve(w.count * timesteps * 3);
  for (std::size_t t = timesteps; t < n; ++t) {
    for (std::size_t s = t - timesteps; s < t; ++s)
      for (std::size_t f = 0; f < 3; ++f) w.x.push_back(feats[f][s]);
    for (std::size_t f = 0; f < 3; ++f) {
      w.y.push_back(cols[f][t]);
      w.delta.push_back(static_cast<double>(data.delta[f][t]));
    }
  }
  return w;
}

void write_dataset_csv(const SurvivalDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "id,T1_obs,delta1,T2_obs,delta2,Y2,T3_obs,delta3,Y3,Y3_code\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << (i + 1) << ',' << io::format_exact(data.observed[0][i]) << ',' << data.delta[0][i]
        << ',' << io::format_exact(data.observed[1][i]) << ',' << data.delta[1][i] << ','
        << data.y2[i] << ',' << io::format_exact(data.observed[2][i]) << ',' << data.delta[2][i]
        << ',' << to_string(data.y3[i]) << ',' << static_cast<int>(data.y3[i]) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

SurvivalDataset read_dataset_csv(const std::string& path) {
  auto t = io::read_csv(path);
  std::array<std::size_t, 3> obs{t.column("T1_obs"), t.column("T2_obs"), t.column("T3_obs")};
  std::array<std::size_t, 3> del{t.column("delta1"), t.column("delta2"), t.column("delta3")};
  std::size_t y2 = t.column("Y2");
  std::size_t y3 = t.column("Y3_code");
  SurvivalDataset d;
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < kResponses; ++j) {
      d.observed[j].push_back(io::parse_double(row[obs[j]], path));
      long dj = io::parse_int(row[del[j]], path);
      if (dj != 0 && dj != 1) throw std::invalid_argument(path + ": delta must be 0 or 1");
      d.delta[j].push_back(static_cast<int>(dj));
    }
    long b = io::parse_int(row[y2], path);
    long c = io::parse_int(row[y3], path);
    if ((b != 0 && b != 1) || c < 0 || c > 2) {
      throw std::invalid_argument(path + ": label out of range");
    }
    d.y2.push_back(static_cast<int>(b));
    d.y3.push_back(static_cast<Category>(c));
  }
  return d;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = 0.0, sa = 0.0, mb = 0.0, sb = 0.0;
  column_moments(a, ma, sa);
  column_moments(b, mb, sb);
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cov += (a[i] - ma) * (b[i] - mb);
  cov /= static_cast<double>(a.size()) - 1.0;
  return cov / (sa * sb);
}

SimSummary summarize(const SurvivalDataset& data) {
  SimSummary s;
  double n = static_cast<double>(data.size());
  for (std::size_t j = 0; j < kResponses; ++j) {
    double censored = 0.0;
    for (int d : data.delta[j]) censored += d == 0 ? 1.0 : 0.0;
    s.censored_fraction[j] = censored / n;
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    s.y2_rate += data.y2[i];
    s.y3_freq[static_cast<std::size_t>(data.y3[i])] += 1.0;
  }
  s.y2_rate /= n;
  for (auto& f : s.y3_freq) f /= n;
  const Times& times = data.true_time[0].empty() ? data.observed : data.true_time;
  s.corr_t1_t2 = data.size() > 1 ? pearson(times[0], times[1]) : 0.0;
  return s;
}

}  // namespace copsurv::sim
