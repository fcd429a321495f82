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

#include "valmet/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "valmet/kernels/parallel.hpp"

namespace valmet {
namespace {

namespace fs = std::filesystem;

const fs::path kSample = fs::path(VALMET_SOURCE_DIR) / "data/sample";

const MetricRecord* find(const Report& r, std::string_view item, std::string_view metric,
                         std::optional<int> cls = std::nullopt) {
  for (const auto& rec : r.records) {
    if (rec.item_id == item && rec.metric_id == metric && (!cls || rec.class_id == cls)) return &rec;
  }
  return nullptr;
}

TEST(PipelineTest, IdenticalMasksGiveDscOne) {
  const EvaluationConfig cfg = parse_config(R"({"task": "SemS", "metrics": ["dsc", "hd"]})", "/d");
  Dataset ds;
  ds.task = Task::SemS;
  LabelMap m(6, 6, 0);
  for (int y = 1; y < 4; ++y) {
    for (int x = 2; x < 5; ++x) m.set(x, y, 1);
  }
  ds.segmentation.push_back({"case", m, m, {}});
  const Report r = run(cfg, ds);
  const MetricRecord* dsc = find(r, "case", "dsc", 1);
  ASSERT_NE(dsc, nullptr);
  EXPECT_EQ(dsc->value.value, 1.0);
  EXPECT_EQ(find(r, "case", "hd", 1)->value.value, 0.0);
}

TEST(PipelineTest, ScorelessDetectionsWithApFailLint) {
  const EvaluationConfig cfg = parse_config(R"({"task": "ObD", "metrics": ["ap", "sensitivity"]})", "/d");
  Dataset ds;
  ds.task = Task::ObD;
  DetectionObject o;
  o.id = 1;
  o.image_id = "a";
  o.class_id = 1;
  o.geometry = Box{0, 0, 2, 2};
  ds.detection.push_back({"a", {o}, {o}, {}});
  try {
    run(cfg, ds);
    FAIL();
  } catch (const LintFailure& e) {
    ASSERT_FALSE(e.warnings().empty());
    EXPECT_TRUE(std::any_of(e.warnings().begin(), e.warnings().end(), [](const PitfallWarning& w) {
      return w.rule == "no_scores" && w.severity == Severity::error;
    }));
  }
  EvaluationConfig lenient = cfg;
  lenient.linter.warn_only = true;
  EXPECT_THROW(run(lenient, ds), EvaluationError);
}

TEST(PipelineTest, ErrorsNameTheModule) {
  const EvaluationConfig cfg = parse_config(R"({"task": "ImLC", "metrics": ["auroc"]})", "/d");
  Dataset ds;
  ds.task = Task::ImLC;
  ds.classification.push_back({"a", 1, {}, 1, {}});
  ds.classification.push_back({"b", 0, {}, 0, {}});
  EvaluationConfig lenient = cfg;
  lenient.linter.warn_only = true;
  try {
    run(lenient, ds);
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_EQ(e.module(), "curve_metrics");
  }
}

TEST(PipelineTest, ClassificationRecordsAreDatasetLevel) {
  const EvaluationConfig cfg =
      parse_config(R"({"task": "ImLC", "metrics": ["sensitivity", "accuracy", "auroc"]})", "/d");
  Dataset ds;
  ds.task = Task::ImLC;
  ds.num_classes = 2;
  ds.classification = {{"a", 1, {0.2, 0.8}, {}, {}},
                       {"b", 1, {0.6, 0.4}, {}, {}},
                       {"c", 0, {0.7, 0.3}, {}, {}},
                       {"d", 0, {0.1, 0.9}, {}, {}}};
  const Report r = run(cfg, ds);
  const MetricRecord* sens = find(r, kDatasetItem, "sensitivity", 1);
  ASSERT_NE(sens, nullptr);
  EXPECT_EQ(sens->value.value, 0.5);
  EXPECT_EQ(find(r, kDatasetItem, "accuracy")->value.value, 0.5);
  // Positive scores .8,.4 vs negatives .3,.9: 2 of 4 pairs ordered.
  EXPECT_EQ(find(r, kDatasetItem, "auroc", 1)->value.value, 0.5);
  EXPECT_FALSE(r.curves.empty());
}

TEST(PipelineTest, HardLabelsGiveCountsWithoutCurves) {
  const EvaluationConfig cfg = parse_config(R"({"task": "ImLC", "metrics": ["sensitivity"]})", "/d");
  Dataset ds;
  ds.task = Task::ImLC;
  ds.num_classes = 2;
  ds.classification = {{"a", 1, {}, 1, {}}, {"b", 1, {}, 0, {}}, {"c", 0, {}, 0, {}}};
  const Report r = run(cfg, ds);
  EXPECT_EQ(find(r, kDatasetItem, "sensitivity", 1)->value.value, 0.5);
  EXPECT_TRUE(r.curves.empty());
}

TEST(PipelineTest, SampleRunsAreByteIdenticalAcrossThreads) {
  for (const char* task : {"imlc", "sems", "obd"}) {
    const EvaluationConfig cfg = load_config(kSample / task / "config.json");
    const Dataset ds = load_dataset(cfg);
    kernels::set_num_threads(1);
    const std::string one = report_to_json(run(cfg, ds));
    for (int threads : {2, 8}) {
      kernels::set_num_threads(threads);
      EXPECT_EQ(report_to_json(run(cfg, ds)), one) << task << " threads " << threads;
    }
    kernels::set_num_threads(1);
    EXPECT_EQ(report_to_json(run(cfg, ds)), one);
  }
}

TEST(PipelineTest, ShuffledItemsGiveTheSameReport) {
  testing::Gen gen(111);
  for (const char* task : {"imlc", "sems", "obd"}) {
    const EvaluationConfig cfg = load_config(kSample / task / "config.json");
    const Dataset ds = load_dataset(cfg);
    const std::string expected = report_to_json(run(cfg, ds));
    for (int trial = 0; trial < 3; ++trial) {
      Dataset s = ds;
      std::shuffle(s.classification.begin(), s.classification.end(), gen.rng());
      std::shuffle(s.segmentation.begin(), s.segmentation.end(), gen.rng());
      std::shuffle(s.detection.begin(), s.detection.end(), gen.rng());
      for (auto& im : s.detection) std::shuffle(im.preds.begin(), im.preds.end(), gen.rng());
      EXPECT_EQ(report_to_json(run(cfg, s)), expected) << task;
    }
  }
}

TEST(PipelineTest, ShuffledInputLinesGiveTheSameReport) {
  const fs::path dir = fs::temp_directory_path() / "valmet_pipeline_shuffle";
  fs::remove_all(dir);
  fs::copy(kSample / "obd", dir, fs::copy_options::recursive);
  const EvaluationConfig cfg = load_config(dir / "config.json");
  const std::string expected = report_to_json(run(cfg));
  testing::Gen gen(112);
  for (const char* file : {"predictions.jsonl", "references.jsonl", "images.jsonl"}) {
    std::istringstream in(read_file(dir / file));
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    std::shuffle(lines.begin(), lines.end(), gen.rng());
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    write_file(dir / file, text);
  }
  EXPECT_EQ(report_to_json(run(cfg)), expected);
  fs::remove_all(dir);
}

TEST(PipelineTest, CurvesOnlyForScoredTasks) {
  const EvaluationConfig cfg = load_config(kSample / "sems/config.json");
  EXPECT_THROW(evaluate_curves(cfg, load_dataset(cfg)), EvaluationError);
  const EvaluationConfig obd = load_config(kSample / "obd/config.json");
  const auto curves = evaluate_curves(obd, load_dataset(obd));
  EXPECT_FALSE(curves.empty());
}

}  // namespace
}  // namespace valmet
