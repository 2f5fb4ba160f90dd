#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace copsurv::io {

// Source column for each canonical field.
struct ColumnMap {
  std::string survival_time = "overall_survival_months";
  std::string event_status = "overall_survival";
  std::string age = "age_at_diagnosis";
  std::string tumor_stage = "tumor_stage";
  std::string er_status = "er_status";
  std::string her2_status = "her2_status";
  std::vector<std::string> extra;  // numeric pass-through features
};

struct ClinicalRecord {
  double survival_time = 0.0;
  int event_status = 0;
  double age = 0.0;
  double tumor_stage = 0.0;
  int er_status = 0;    // Negative 0, Positive 1
  int her2_status = 0;  // Negative 0, Positive 1
  std::vector<double> extra;
};

struct NumericSummary {
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

struct ClinicalSummary {
  std::size_t rows_read = 0;
  std::size_t n = 0;  // after dropping incomplete rows
  NumericSummary survival_time;
  NumericSummary age;
  NumericSummary tumor_stage;
  std::map<int, std::size_t> stage_counts;
  std::size_t er_positive = 0;
  std::size_t her2_positive = 0;
  double event_rate = 0.0;
};

struct ClinicalData {
  std::vector<ClinicalRecord> records;
  std::vector<std::string> extra_names;
  ClinicalSummary summary;
};

// Event labels: Dead/Deceased -> 1, Alive/Living -> 0, numeric 0/1 as is.
int parse_event_label(const std::string& s);
int parse_status_label(const std::string& s, const std::string& column);
bool is_missing(const std::string& s);

ClinicalData load_clinical_csv(const std::string& path, const ColumnMap& map = {});
ClinicalSummary summarize_records(const std::vector<ClinicalRecord>& records);
std::string format_summary(const ClinicalSummary& s);

struct Preprocessed {
  std::size_t n = 0;
  std::size_t timesteps = 0;
  std::size_t features = 0;
  std::vector<std::string> feature_names;
  std::vector<double> means;
  std::vector<double> sds;
  std::vector<std::string> dropped;  // zero-variance features
  std::vector<double> x;  // n x timesteps x features
  std::vector<double> y;  // n x 2: survival_time, event_status

  double x_at(std::size_t i, std::size_t t, std::size_t f) const {
    return x[(i * timesteps + t) * features + f];
  }
};

// Features (age, tumor_stage, er, her2, extras...) standardized to mean 0,
// SD 1 and replicated across every time step.
Preprocessed preprocess(const ClinicalData& data, std::size_t timesteps = 10);
std::vector<double> destandardize(const Preprocessed& p, std::size_t sample);

// `sample,step,<features...>` in long form, one row per (sample, step).
void write_processed_csv(const Preprocessed& p, const std::string& path);

}  // namespace copsurv::io
