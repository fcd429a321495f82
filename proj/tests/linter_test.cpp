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

#include "valmet/linter.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "lint_corpus.hpp"
#include "test_util.hpp"

namespace valmet {
namespace {

using testing::imlc;
using testing::lint_corpus;
using testing::render_lint_corpus;

const std::string kGolden = std::string(VALMET_TEST_DATA) + "/lint_golden.txt";

std::set<std::string> rules(const std::vector<PitfallWarning>& w) {
  std::set<std::string> out;
  for (const auto& x : w) out.insert(x.rule);
  return out;
}

MetricSelection select(std::vector<std::string> m) {
  MetricSelection s;
  s.metrics = std::move(m);
  return s;
}

TEST(FingerprintTest, ClassificationPrevalenceAndScores) {
  Dataset ds;
  ds.task = Task::ImLC;
  for (int i = 0; i < 100; ++i) {
    ds.classification.push_back({"i" + std::to_string(i), i < 95 ? 0 : 1, {0.5, 0.5}, {}, {{"site", "a"}}});
  }
  DatasetDeclarations decl;
  decl.strata_keys = {"site", "gender"};
  const DatasetFingerprint fp = fingerprint(ds, decl);
  EXPECT_DOUBLE_EQ(fp.prevalence_ratio(), 19.0);
  EXPECT_TRUE(fp.has_scores);
  EXPECT_EQ(fp.strata_keys, std::vector<std::string>{"site"});
  ds.classification[3].scores.clear();
  EXPECT_FALSE(fingerprint(ds).has_scores);
}

TEST(FingerprintTest, SegmentationCountsAndSizes) {
  Dataset ds;
  ds.task = Task::SemS;
  LabelMap full(4, 4, 1), empty(4, 4, 0);
  LabelMap two(4, 4, 0);
  two.set(0, 0, 1);
  two.set(3, 3, 1);
  ds.segmentation.push_back({"a", full, full, {}});
  ds.segmentation.push_back({"b", two, empty, {}});
  ds.segmentation.push_back({"c", empty, two, {}});
  const DatasetFingerprint fp = fingerprint(ds);
  EXPECT_EQ(fp.empty_reference_count, 1);
  EXPECT_EQ(fp.empty_prediction_count, 1);
  ASSERT_TRUE(fp.structure_sizes.contains(1));
  const SizeStats s = fp.structure_sizes.at(1);
  EXPECT_EQ(s.n_structures, 3);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.median, 1.0);
  // Sizes {16, 1, 1}: mean 6, population std sqrt(50).
  EXPECT_NEAR(s.cv, std::sqrt(50.0) / 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(fp.class_prevalences.at(1), 18.0 / 48.0);
}

TEST(FingerprintTest, DetectionWithoutScores) {
  Dataset ds;
  ds.task = Task::ObD;
  DetectionObject ref;
  ref.geometry = Box{0, 0, 1, 1};
  DetectionObject pred = ref;
  ds.detection.push_back({"a", {ref}, {pred}, {}});
  ds.detection.push_back({"b", {}, {}, {}});
  const DatasetFingerprint fp = fingerprint(ds);
  EXPECT_FALSE(fp.has_scores);
  EXPECT_EQ(fp.empty_reference_count, 1);
  EXPECT_EQ(fp.empty_prediction_count, 1);
}

TEST(LintTest, ImbalanceFiresForAccuracy) {
  const auto fp = imlc(500, {{0, 0.95}, {1, 0.05}});
  const auto w = lint(fp, select({"accuracy"}));
  ASSERT_TRUE(rules(w).contains("imbalance"));
  EXPECT_EQ(w[0].code, "P2.3");
  EXPECT_NEAR(std::stod(w[0].features.at("prevalence_ratio")), 19.0, 1e-12);
  EXPECT_FALSE(rules(lint(fp, select({"ppv"}))).contains("imbalance"));
}

TEST(LintTest, RedundantPairOnlyForDscIou) {
  const auto fp = testing::sems(20, 2, {});
  EXPECT_TRUE(rules(lint(fp, select({"dsc", "iou"}))).contains("redundant_pair"));
  EXPECT_FALSE(rules(lint(fp, select({"dsc", "nsd"}))).contains("redundant_pair"));
}

TEST(LintTest, MissingScoresBlockUnlessWarnOnly) {
  const auto fp = testing::obd(10, false);
  const auto w = lint(fp, select({"ap"}));
  ASSERT_EQ(rules(w).count("no_scores"), 1u);
  EXPECT_EQ(w.front().severity, Severity::error);
  EXPECT_TRUE(has_blocking(w, {}));
  LinterConfig lenient;
  lenient.warn_only = true;
  EXPECT_FALSE(has_blocking(w, lenient));
  EXPECT_FALSE(has_blocking(lint(fp, select({"sensitivity"})), {}));
}

TEST(LintTest, OnlyMissingScoresIsBlocking) {
  for (const auto& k : lint_corpus()) {
    for (const auto& w : lint(k.fp, k.sel, k.cfg)) {
      EXPECT_EQ(w.severity == Severity::error, w.rule == "no_scores") << k.name << " " << w.rule;
    }
  }
}

TEST(LintTest, UnknownMetricThrows) {
  EXPECT_THROW(lint(imlc(10, {{0, 0.5}, {1, 0.5}}), select({"dice_plus"})), ParameterError);
}

TEST(LintTest, EveryAnchorResolves) {
  const auto& table = anchor_table();
  for (const auto& k : lint_corpus()) {
    for (const auto& w : lint(k.fp, k.sel, k.cfg)) {
      EXPECT_TRUE(table.contains(w.anchor)) << w.anchor;
    }
  }
  EXPECT_EQ(lint_rules().size(), 15u);
}

TEST(LintTest, CorpusCoversEveryRule) {
  std::set<std::string> fired;
  for (const auto& k : lint_corpus()) {
    for (const auto& r : rules(lint(k.fp, k.sel, k.cfg))) fired.insert(r);
  }
  for (const auto& [code, rule] : lint_rules()) EXPECT_TRUE(fired.contains(rule)) << rule;
  EXPECT_EQ(lint_corpus().size(), 20u);
}

TEST(LintTest, OrderedByCodeThenRule) {
  for (const auto& k : lint_corpus()) {
    const auto w = lint(k.fp, k.sel, k.cfg);
    for (size_t i = 1; i < w.size(); ++i) {
      EXPECT_LE(std::tie(w[i - 1].code, w[i - 1].rule), std::tie(w[i].code, w[i].rule));
    }
  }
}

TEST(LintGoldenTest, CorpusMatchesGoldenFile) {
  const std::string rendered = render_lint_corpus(lint_corpus(), 1);
  if (std::getenv("VALMET_UPDATE_GOLDEN")) {
    std::ofstream(kGolden, std::ios::binary) << rendered;
  }
  std::ifstream in(kGolden, std::ios::binary);
  ASSERT_TRUE(in) << kGolden;
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(rendered, golden.str());
}

TEST(LintGoldenTest, ByteStableAcrossRunsAndThreads) {
  const auto corpus = lint_corpus();
  const std::string serial = render_lint_corpus(corpus, 1);
  for (int threads : {1, 2, 8}) {
    for (int run = 0; run < 3; ++run) EXPECT_EQ(render_lint_corpus(corpus, threads), serial);
  }
}

TEST(LintPropertyTest, TighteningThresholdsNeverRemovesFirings) {
  testing::Gen gen(81);
  const std::vector<std::string> pool = {"accuracy", "auroc", "balanced_accuracy", "ece", "brier", "dsc",
                                         "iou",      "nsd",   "hd",                "cl_dice"};
  for (int trial = 0; trial < 300; ++trial) {
    DatasetFingerprint fp = testing::sems(gen.uniform_int(1, 300), gen.uniform_int(2, 4), {});
    if (gen.coin()) {
      fp = imlc(gen.uniform_int(1, 300), {{0, gen.uniform(0.5, 0.99)}, {1, 0.0}});
      fp.class_prevalences[1] = 1.0 - fp.class_prevalences[0];
    } else {
      for (int k = 1; k < fp.num_classes; ++k) {
        fp.structure_sizes[k] = {gen.uniform_int(1, 20), 1.0, gen.uniform(1, 30), gen.uniform(0, 2)};
      }
    }
    MetricSelection sel;
    for (const auto& m : pool) {
      if (gen.coin(0.4)) sel.metrics.push_back(m);
    }
    LinterConfig loose;
    loose.imbalance_ratio = gen.uniform(1, 30);
    loose.small_test_set = gen.uniform_int(1, 300);
    loose.small_structure_px = gen.uniform(1, 30);
    loose.size_cv = gen.uniform(0, 2);
    LinterConfig tight = loose;
    tight.imbalance_ratio *= gen.uniform(0.2, 1.0);
    tight.small_test_set += gen.uniform_int(0, 100);
    tight.small_structure_px *= gen.uniform(1.0, 3.0);
    tight.size_cv *= gen.uniform(0.2, 1.0);
    const auto a = rules(lint(fp, sel, loose)), b = rules(lint(fp, sel, tight));
    for (const auto& r : a) EXPECT_TRUE(b.contains(r)) << r;
  }
}

TEST(LintPropertyTest, DeterministicForEqualInputs) {
  for (const auto& k : lint_corpus()) {
    EXPECT_EQ(lint(k.fp, k.sel, k.cfg), lint(k.fp, k.sel, k.cfg));
  }
}

TEST(LintNamesTest, RoundTrip) {
  EXPECT_EQ(severity_from_string("error"), Severity::error);
  EXPECT_EQ(threshold_policy_from_string(to_string(ThresholdPolicy::per_class)), ThresholdPolicy::per_class);
  EXPECT_THROW(severity_from_string("fatal"), ParameterError);
}

}  // namespace
}  // namespace valmet
