#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "io/clinical.hpp"
#include "io/comparison.hpp"
#include "io/csv.hpp"

using namespace copsurv::io;

namespace {

const std::string kFixture = std::string(COPSURV_FIXTURE_DIR) + "/metabric_sample.csv";

std::string temp_file(const std::string& name, const std::string& text) {
  auto p = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

}  // namespace

TEST_CASE("csv lines and tables") {
  CHECK(split_csv_line("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(split_csv_line("\"x,y\",\"say \"\"hi\"\"\",z") ==
        std::vector<std::string>{"x,y", "say \"hi\"", "z"});
  std::istringstream in("\xEF\xBB\xBFh1,h2\r\n1,2\r\n\r\n3,4\n");
  auto t = parse_csv(in);
  CHECK(t.header == std::vector<std::string>{"h1", "h2"});
  CHECK(t.rows.size() == 2);
  CHECK(t.column("h2") == 1);
  CHECK_FALSE(t.has_column("h3"));
  CHECK_THROWS_AS(t.column("h3"), std::invalid_argument);
  std::istringstream ragged("a,b\n1\n");
  CHECK_THROWS_AS(parse_csv(ragged), std::invalid_argument);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_csv(empty), std::invalid_argument);
  CHECK_THROWS_AS(read_csv("/nonexistent/file.csv"), std::runtime_error);
}

TEST_CASE("number formatting and parsing") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456.789, 1.8054905})
    CHECK(parse_double(format_exact(v), "t") == v);
  CHECK(format_fixed(0.36744, 4) == "0.3674");
  CHECK(format_fixed(-0.00001, 4) == "0.0000");
  CHECK(parse_double(" 2.5 ", "t") == 2.5);
  CHECK_THROWS_AS(parse_double("abc", "t"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("1.5x", "t"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("nan", "t"), std::invalid_argument);
  CHECK(parse_int("3", "t") == 3);
  CHECK(parse_int("2.0", "t") == 2);
  CHECK_THROWS_AS(parse_int("2.5", "t"), std::invalid_argument);
}

TEST_CASE("clinical labels") {
  CHECK(parse_event_label("Dead") == 1);
  CHECK(parse_event_label("Deceased") == 1);
  CHECK(parse_event_label("Alive") == 0);
  CHECK(parse_event_label("Living") == 0);
  CHECK(parse_event_label("1") == 1);
  CHECK(parse_event_label("0") == 0);
  CHECK_THROWS_WITH_AS(parse_event_label("Unknown"), doctest::Contains("Unknown"), std::invalid_argument);
  CHECK(parse_status_label("Positive", "er_status") == 1);
  CHECK(parse_status_label("Negative", "er_status") == 0);
  CHECK_THROWS_AS(parse_status_label("Borderline", "er_status"), std::invalid_argument);
  CHECK(is_missing(""));
  CHECK(is_missing("NA"));
  CHECK(is_missing(" nan "));
  CHECK_FALSE(is_missing("0"));
}

TEST_CASE("missing rows are dropped") {
  auto p = temp_file("copsurv_three_rows.csv",
                     "overall_survival_months,overall_survival,age_at_diagnosis,tumor_stage,er_status,"
                     "her2_status\n10,Dead,50,1,Positive,Negative\n20,Alive,60,,Negative,Negative\n"
                     "30,Alive,70,2,Positive,Positive\n");
  auto d = load_clinical_csv(p);
  std::filesystem::remove(p);
  CHECK(d.summary.rows_read == 3);
  REQUIRE(d.records.size() == 2);
  CHECK(d.records[0].event_status == 1);
  CHECK(d.records[1].event_status == 0);
  CHECK(d.records[1].her2_status == 1);
}

TEST_CASE("schema errors") {
  auto p = temp_file("copsurv_bad_schema.csv", "survival,age\n1,2\n");
  CHECK_THROWS_WITH_AS(load_clinical_csv(p), doctest::Contains("overall_survival_months"),
                       std::invalid_argument);
  auto q = temp_file("copsurv_bad_event.csv",
                     "overall_survival_months,overall_survival,age_at_diagnosis,tumor_stage,er_status,"
                     "her2_status\n10,Missing-in-action,50,1,Positive,Negative\n");
  CHECK_THROWS_WITH_AS(load_clinical_csv(q), doctest::Contains("Missing-in-action"), std::invalid_argument);
  std::filesystem::remove(p);
  std::filesystem::remove(q);
}

TEST_CASE("fixture summary") {
  auto d = load_clinical_csv(kFixture);
  const auto& s = d.summary;
  CHECK(s.rows_read == 20);
  CHECK(s.n == 18);
  CHECK(std::abs(s.survival_time.mean - 117.955) < 1e-9);
  CHECK(std::abs(s.survival_time.sd - 69.267307223538) < 1e-9);
  CHECK(std::abs(s.survival_time.median - 122.065) < 1e-9);
  CHECK(std::abs(s.age.mean - 64.37055555555555) < 1e-9);
  CHECK(std::abs(s.age.sd - 15.512012602087463) < 1e-9);
  CHECK(s.stage_counts == std::map<int, std::size_t>{{1, 4}, {2, 10}, {3, 3}, {4, 1}});
  CHECK(s.er_positive == 16);
  CHECK(s.her2_positive == 3);
  CHECK(s.event_rate == 0.5);
  auto text = format_summary(s);
  CHECK(text.find("n: 18") != std::string::npos);
  CHECK(text.find("tumor_stage_counts: 1=4 2=10 3=3 4=1") != std::string::npos);
}

TEST_CASE("preprocessing") {
  ColumnMap map;
  map.extra = {"brca1", "tp53"};
  auto d = load_clinical_csv(kFixture, map);
  for (std::size_t T : {std::size_t{10}, std::size_t{12}}) {
    auto p = preprocess(d, T);
    CHECK(p.n == 18);
    CHECK(p.timesteps == T);
    CHECK(p.features == 6);
    CHECK(p.x.size() == 18 * T * 6);
    CHECK(p.y.size() == 36);
    for (std::size_t f = 0; f < p.features; ++f) {
      double m = 0.0, ss = 0.0;
      for (std::size_t i = 0; i < p.n; ++i) m += p.x_at(i, 0, f);
      m /= 18.0;
      for (std::size_t i = 0; i < p.n; ++i) ss += (p.x_at(i, 0, f) - m) * (p.x_at(i, 0, f) - m);
      CHECK(std::abs(m) < 1e-9);
      CHECK(std::abs(std::sqrt(ss / 17.0) - 1.0) < 1e-9);
    }
    for (std::size_t i = 0; i < p.n; ++i)
      for (std::size_t t = 1; t < T; ++t)
        for (std::size_t f = 0; f < p.features; ++f) CHECK(p.x_at(i, t, f) == p.x_at(i, 0, f));
    for (std::size_t i = 0; i < p.n; ++i) {
      auto back = destandardize(p, i);
      const auto& r = d.records[i];
      CHECK(std::abs(back[0] - r.age) < 1e-9);
      CHECK(std::abs(back[1] - r.tumor_stage) < 1e-9);
      CHECK(std::abs(back[4] - r.extra[0]) < 1e-9);
    }
  }
  auto again = preprocess(load_clinical_csv(kFixture, map), 10);
  CHECK(again.x == preprocess(d, 10).x);
}

TEST_CASE("zero-variance features are dropped") {
  ClinicalData d;
  for (int i = 0; i < 4; ++i) {
    ClinicalRecord r;
    r.survival_time = 10 + i;
    r.age = 40 + 3 * i;
    r.tumor_stage = 1 + i % 2;
    r.er_status = 1;
    r.her2_status = i % 2;
    d.records.push_back(r);
  }
  auto p = preprocess(d, 3);
  CHECK(p.features == 3);
  CHECK(p.dropped == std::vector<std::string>{"er_status"});
  CHECK_THROWS_AS(preprocess(ClinicalData{}, 10), std::invalid_argument);
}

TEST_CASE("comparison table") {
  std::vector<ComparisonRow> rows{
      {"CNN-LSTM Clayton", "Response_1", 0.3674, 2.0058, 46.0952, 16.8473},
      {"LSTM ReLU", "Response_2", -0.0123, 0.5, std::nullopt, std::nullopt},
  };
  auto p = (std::filesystem::temp_directory_path() / "copsurv_table.csv").string();
  write_table_csv(rows, p);
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() ==
        "Model,Response,Mean_Residual,SD_Residual,Mean_ARL,SD_ARL\n"
        "CNN-LSTM Clayton,Response_1,0.3674,2.0058,46.0952,16.8473\n"
        "LSTM ReLU,Response_2,-0.0123,0.5000,NA,NA\n");
  auto back = read_table_csv(p);
  REQUIRE(back.size() == 2);
  CHECK(back[0].model == "CNN-LSTM Clayton");
  CHECK(back[0].mean_residual == 0.3674);
  CHECK(back[0].sd_residual == 2.0058);
  CHECK(back[0].mean_arl == 46.0952);
  CHECK(back[0].sd_arl == 16.8473);
  CHECK_FALSE(back[1].mean_arl.has_value());
  CHECK_FALSE(back[1].sd_arl.has_value());
  CHECK(format_table_csv({}) == std::string(kComparisonHeader) + "\n");
  write_table_csv({}, p);
  CHECK(read_table_csv(p).empty());
  std::filesystem::remove(p);
}
