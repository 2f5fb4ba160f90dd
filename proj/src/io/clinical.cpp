#include "io/clinical.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "io/csv.hpp"

namespace copsurv::io {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

NumericSummary describe(std::vector<double> v) {
  NumericSummary s;
  if (v.empty()) return s;
  double n = static_cast<double>(v.size());
  for (double x : v) s.mean += x;
  s.mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.max = v.back();
  std::size_t m = v.size() / 2;
  s.median = v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  return s;
}

}  // namespace

bool is_missing(const std::string& s) {
  auto t = lower(trim(s));
  return t.empty() || t == "na" || t == "nan" || t == "null" || t == "none";
}

int parse_event_label(const std::string& s) {
  auto t = trim(s);
  auto l = lower(t);
  if (l == "dead" || l == "deceased" || l == "1") return 1;
  if (l == "alive" || l == "living" || l == "0") return 0;
  if (l == "1.0") return 1;
  if (l == "0.0") return 0;
  throw std::invalid_argument("unknown event label '" + t + "'");
}

int parse_status_label(const std::string& s, const std::string& column) {
  auto l = lower(trim(s));
  if (l == "negative" || l == "0") return 0;
  if (l == "positive" || l == "1") return 1;
  throw std::invalid_argument("unknown " + column + " value '" + trim(s) + "'");
}

ClinicalData load_clinical_csv(const std::string& path, const ColumnMap& map) {
  auto table = read_csv(path);
  std::size_t c_time = table.column(map.survival_time);
  std::size_t c_event = table.column(map.event_status);
  std::size_t c_age = table.column(map.age);
  std::size_t c_stage = table.column(map.tumor_stage);
  std::size_t c_er = table.column(map.er_status);
  std::size_t c_her2 = table.column(map.her2_status);
  std::vector<std::size_t> c_extra;
  for (const auto& name : map.extra) c_extra.push_back(table.column(name));

  ClinicalData out;
  out.extra_names = map.extra;
  for (const auto& row : table.rows) {
    bool missing = false;
    for (auto c : {c_time, c_event, c_age, c_stage, c_er, c_her2}) missing |= is_missing(row[c]);
    for (auto c : c_extra) missing |= is_missing(row[c]);
    if (missing) continue;
    ClinicalRecord r;
    r.survival_time = parse_double(row[c_time], map.survival_time);
    r.event_status = parse_event_label(row[c_event]);
    r.age = parse_double(row[c_age], map.age);
    r.tumor_stage = parse_double(row[c_stage], map.tumor_stage);
    r.er_status = parse_status_label(row[c_er], map.er_status);
    r.her2_status = parse_status_label(row[c_her2], map.her2_status);
    for (std::size_t k = 0; k < c_extra.size(); ++k) {
      r.extra.push_back(parse_double(row[c_extra[k]], map.extra[k]));
    }
    out.records.push_back(std::move(r));
  }
  out.summary = summarize_records(out.records);
  out.summary.rows_read = table.rows.size();
  return out;
}

ClinicalSummary summarize_records(const std::vector<ClinicalRecord>& records) {
  ClinicalSummary s;
  s.n = records.size();
  std::vector<double> time, age, stage;
  std::size_t events = 0;
  for (const auto& r : records) {
    time.push_back(r.survival_time);
    age.push_back(r.age);
    stage.push_back(r.tumor_stage);
    s.stage_counts[static_cast<int>(std::lround(r.tumor_stage))]++;
    s.er_positive += static_cast<std::size_t>(r.er_status);
    s.her2_positive += static_cast<std::size_t>(r.her2_status);
    events += static_cast<std::size_t>(r.event_status);
  }
  s.survival_time = describe(time);
  s.age = describe(age);
  s.tumor_stage = describe(stage);
  s.event_rate = s.n ? static_cast<double>(events) / static_cast<double>(s.n) : 0.0;
  return s;
}

std::string format_summary(const ClinicalSummary& s) {
  std::ostringstream os;
  auto numeric = [&](const char* name, const NumericSummary& v) {
    os << name << ": mean " << format_fixed(v.mean, 1) << " sd " << format_fixed(v.sd, 1)
       << " min " << format_fixed(v.min, 1) << " median " << format_fixed(v.median, 1) << " max "
       << format_fixed(v.max, 1) << '\n';
  };
  os << "rows_read: " << s.rows_read << '\n';
  os << "n: " << s.n << '\n';
  numeric("survival_time", s.survival_time);
  os << "event_status: event_rate " << format_fixed(s.event_rate, 4) << '\n';
  numeric("age", s.age);
  numeric("tumor_stage", s.tumor_stage);
  os << "tumor_stage_counts:";
  for (const auto& [stage, count] : s.stage_counts) os << ' ' << stage << '=' << count;
  os << '\n';
  os << "er_status: Negative " << s.n - s.er_positive << " Positive " << s.er_positive << '\n';
  os << "her2_status: Negative " << s.n - s.her2_positive << " Positive " << s.her2_positive
     << '\n';
  return os.str();
}

Preprocessed preprocess(const ClinicalData& data, std::size_t timesteps) {
  const auto& recs = data.records;
  if (recs.size() < 2) throw std::invalid_argument("preprocess: need at least 2 records");
  if (timesteps == 0) throw std::invalid_argument("preprocess: timesteps must be >= 1");

  std::vector<std::string> names{"age", "tumor_stage", "er_status", "her2_status"};
  names.insert(names.end(), data.extra_names.begin(), data.extra_names.end());
  std::vector<std::vector<double>> cols(names.size());
  for (const auto& r : recs) {
    cols[0].push_back(r.age);
    cols[1].push_back(r.tumor_stage);
    cols[2].push_back(r.er_status);
    cols[3].push_back(r.her2_status);
    for (std::size_t k = 0; k < r.extra.size(); ++k) cols[4 + k].push_back(r.extra[k]);
  }

  Preprocessed p;
  p.n = recs.size();
  p.timesteps = timesteps;
  std::vector<std::size_t> kept;
  for (std::size_t f = 0; f < cols.size(); ++f) {
    auto s = describe(cols[f]);
    if (!(s.sd > 0.0)) {
      p.dropped.push_back(names[f]);
      continue;
    }
    kept.push_back(f);
    p.feature_names.push_back(names[f]);
    p.means.push_back(s.mean);
    p.sds.push_back(s.sd);
  }
  if (kept.empty()) throw std::invalid_argument("preprocess: every feature has zero variance");
  p.features = kept.size();
  p.x.reserve(p.n * timesteps * p.features);
  for (std::size_t i = 0; i < p.n; ++i) {
    std::vector<double> row;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      row.push_back((cols[kept[k]][i] - p.means[k]) / p.sds[k]);
    }
    for (std::size_t t = 0; t < timesteps; ++t) p.x.insert(p.x.end(), row.begin(), row.end());
    p.y.push_back(recs[i].survival_time);
    p.y.push_back(recs[i].event_status);
  }
  return p;
}

std::vector<double> destandardize(const Preprocessed& p, std::size_t sample) {
  std::vector<double> out(p.features);
  for (std::size_t f = 0; f < p.features; ++f) out[f] = p.x_at(sample, 0, f) * p.sds[f] + p.means[f];
  return out;
}

void write_processed_csv(const Preprocessed& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "sample,step";
  for (const auto& n : p.feature_names) out << ',' << n;
  out << ",survival_time,event_status\n";
  for (std::size_t i = 0; i < p.n; ++i) {
    for (std::size_t t = 0; t < p.timesteps; ++t) {
      out << i << ',' << t;
      for (std::size_t f = 0; f < p.features; ++f) out << ',' << format_exact(p.x_at(i, t, f));
      out << ',' << format_exact(p.y[2 * i]) << ',' << static_cast<int>(p.y[2 * i + 1]) << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace copsurv::io
