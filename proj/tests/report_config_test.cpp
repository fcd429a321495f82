/* Copyright 2026 The valmet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "valmet/config.hpp"
#include "valmet/pipeline.hpp"
#include "valmet/report.hpp"

namespace valmet {
namespace {

namespace fs = std::filesystem;

const fs::path kSample = fs::path(VALMET_SOURCE_DIR) / "data/sample";

bool same_value(const MetricValue& a, const MetricValue& b) {
  if (a.nan_reason != b.nan_reason) return false;
  if (!a) return true;
  return std::memcmp(&a.value, &b.value, sizeof(double)) == 0;
}

void expect_same_records(const std::vector<MetricRecord>& a, const std::vector<MetricRecord>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].item_id, b[i].item_id);
    EXPECT_EQ(a[i].class_id, b[i].class_id);
    EXPECT_EQ(a[i].metric_id, b[i].metric_id);
    EXPECT_EQ(a[i].metadata, b[i].metadata);
    EXPECT_TRUE(same_value(a[i].value, b[i].value)) << a[i].item_id << " " << a[i].metric_id;
  }
}

TEST(ConfigTest, SampleConfigsRoundTrip) {
  for (const char* task : {"imlc", "sems", "obd"}) {
    const EvaluationConfig c = load_config(kSample / task / "config.json");
    const std::string echo = config_to_json(c);
    const EvaluationConfig back = parse_config(echo, kSample / task);
    EXPECT_EQ(config_to_json(back), echo) << task;
    EXPECT_EQ(back.inputs.manifest, c.inputs.manifest);
  }
}

TEST(ConfigTest, MetricHyperparameters) {
  const EvaluationConfig c = parse_config(
      R"({"task": "SemS", "inputs": {"manifest": "m.jsonl"},
          "metrics": ["dsc", {"id": "nsd", "tau": 2.5}, {"id": "hd95", "percentile": 90}]})",
      "/data");
  EXPECT_EQ(c.task, Task::SemS);
  EXPECT_EQ(c.inputs.manifest, fs::path("/data/m.jsonl"));
  EXPECT_EQ(c.inputs_raw.manifest, fs::path("m.jsonl"));
  ASSERT_NE(c.metric("nsd"), nullptr);
  EXPECT_EQ(c.metric("nsd")->tau, 2.5);
  EXPECT_EQ(c.metric("hd95")->percentile, 90.0);
  EXPECT_TRUE(c.has_metric("dsc"));
  EXPECT_FALSE(c.has_metric("iou"));
  EXPECT_FALSE(c.seed.has_value());
}

TEST(ConfigTest, Rejections) {
  const fs::path base = "/d";
  auto parse = [&](const std::string& t) { return parse_config(t, base); };
  EXPECT_THROW(parse("{\"task\": \"ImLC\""), ParseError);
  EXPECT_THROW(parse(R"({"metrics": ["dsc"]})"), ParameterError);
  EXPECT_THROW(parse(R"({"task": "ImLC", "metrics": []})"), ParameterError);
  EXPECT_THROW(parse(R"({"task": "ImLC", "metrics": ["dsc_plus"]})"), ParameterError);
  EXPECT_THROW(parse(R"({"task": "ImLC", "metrics": ["ppv", "ppv"]})"), ParameterError);
  EXPECT_THROW(parse(R"({"task": "ImLC", "metrics": ["ppv"], "colour": 1})"), ParameterError);
  EXPECT_THROW(parse(R"({"task": "ImLC", "metrics": [{"id": "f_beta", "beta": 0}]})"), ParameterError);
  EXPECT_THROW(parse(R"({"task": "ImLC", "metrics": [{"id": "partial_auroc", "range": [0.5, 0.2]}]})"),
               ParameterError);
  EXPECT_THROW(parse(R"({"task": "ImLC", "seed": -1, "metrics": ["ppv"]})"), ParameterError);
  EXPECT_THROW(parse(R"({"task": "ImLC", "num_classes": 1, "metrics": ["ppv"]})"), ParameterError);
  EXPECT_THROW(parse(R"({"task": "Video", "metrics": ["ppv"]})"), ParameterError);
}

TEST(ConfigTest, TaskConsistencyCheckedBeforeRun) {
  const EvaluationConfig c = parse_config(R"({"task": "ImLC", "metrics": ["dsc", "ppv"]})", "/d");
  EXPECT_THROW(c.validate_for_run(), ParameterError);
  const EvaluationConfig ok = parse_config(R"({"task": "ImLC", "metrics": ["ppv"]})", "/d");
  EXPECT_NO_THROW(ok.validate_for_run());
}

TEST(ConfigTest, SelectionReflectsExplicitSettings) {
  const EvaluationConfig c = parse_config(
      R"({"task": "ObD", "metrics": ["froc_score"], "froc": {"fppi_range": [0, 4]},
          "aggregation": {"missing_policy": "worst_value", "grouping": ["site"]}})",
      "/d");
  const MetricSelection s = c.selection();
  EXPECT_TRUE(s.fppi_range_explicit);
  EXPECT_TRUE(s.missing_policy_explicit);
  EXPECT_FALSE(s.binning_explicit);
  EXPECT_EQ(s.grouping, std::vector<std::string>{"site"});
  EXPECT_EQ(c.effective_fppi_range().hi, 4.0);
}

MetricValue random_value(testing::Gen& gen) {
  switch (gen.uniform_int(0, 5)) {
    case 0: return MetricValue::nan(NanReason::zero_denominator);
    case 1: return MetricValue::nan(NanReason::empty_set);
    case 2: return MetricValue::of(std::numeric_limits<double>::infinity());
    case 3: return MetricValue::of(gen.uniform(-1e6, 1e6));
    default: return MetricValue::of(gen.uniform(0, 1));
  }
}

TEST(ReportTest, RecordsJsonlRoundTripIsExact) {
  testing::Gen gen(101);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MetricRecord> recs;
    for (int i = 0, n = gen.uniform_int(0, 20); i < n; ++i) {
      MetricRecord r;
      r.item_id = "case\"" + std::to_string(gen.uniform_int(0, 99));
      if (gen.coin()) r.class_id = gen.uniform_int(0, 4);
      r.metric_id = gen.coin() ? "dsc" : "hd";
      r.value = random_value(gen);
      if (gen.coin()) r.metadata["patient"] = "p" + std::to_string(gen.uniform_int(0, 3));
      recs.push_back(r);
    }
    const std::string text = records_to_jsonl(recs);
    const auto back = records_from_jsonl(text);
    expect_same_records(recs, back);
    EXPECT_EQ(records_to_jsonl(back), text);
  }
}

TEST(ReportTest, NanCarriesReasonAndInfinityIsTagged) {
  std::vector<MetricRecord> recs(2);
  recs[0] = {"a", 1, "ppv", MetricValue::nan(NanReason::zero_denominator), {}};
  recs[1] = {"b", std::nullopt, "hd", MetricValue::of(std::numeric_limits<double>::infinity()), {}};
  const std::string text = records_to_jsonl(recs);
  EXPECT_NE(text.find("\"nan_reason\":\"zero_denominator\""), std::string::npos) << text;
  EXPECT_NE(text.find("\"value\":null"), std::string::npos) << text;
  EXPECT_NE(text.find("\"inf\""), std::string::npos) << text;
  EXPECT_THROW(records_from_jsonl("{\"item_id\": \"a\"}\n"), ParseError);
}

TEST(ReportTest, ShortestRoundTripNumbers) {
  std::vector<MetricRecord> recs = {{"a", std::nullopt, "dsc", MetricValue::of(0.1), {}},
                                    {"b", std::nullopt, "dsc", MetricValue::of(1.0 / 3.0), {}}};
  const std::string text = records_to_jsonl(recs);
  EXPECT_NE(text.find("0.1"), std::string::npos);
  EXPECT_EQ(text.find("0.10000000000000001"), std::string::npos);
  EXPECT_EQ(records_from_jsonl(text)[1].value.value, 1.0 / 3.0);
}

TEST(ReportTest, SampleReportsRoundTrip) {
  for (const char* task : {"imlc", "sems", "obd"}) {
    const Report r = run(load_config(kSample / task / "config.json"));
    const std::string text = report_to_json(r);
    const Report back = report_from_json(text);
    EXPECT_EQ(back.engine_version, kEngineVersion);
    EXPECT_EQ(back.config_json, r.config_json);
    EXPECT_EQ(back.warnings, r.warnings);
    expect_same_records(r.records, back.records);
    EXPECT_EQ(report_to_json(back), text) << task;
  }
}

TEST(ReportTest, SortRecordsIsCanonical) {
  std::vector<MetricRecord> recs = {{"b", 1, "dsc", MetricValue::of(0.5), {}},
                                    {"a", 2, "dsc", MetricValue::of(0.5), {}},
                                    {"a", 1, "iou", MetricValue::of(0.5), {}},
                                    {"a", 1, "dsc", MetricValue::of(0.5), {}}};
  auto shuffled = recs;
  sort_records(recs);
  testing::Gen gen(102);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(shuffled.begin(), shuffled.end(), gen.rng());
    auto s = shuffled;
    sort_records(s);
    expect_same_records(s, recs);
  }
}

}  // namespace
}  // namespace valmet
