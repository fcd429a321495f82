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

#include "valmet/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace valmet {
namespace {

// Probability that a random positive outscores a random negative, ties 1/2.
double mann_whitney(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0;
  int64_t pairs = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    for (size_t j = 0; j < s.size(); ++j) {
      if (y[i] != 1 || y[j] != 0) continue;
      ++pairs;
      if (s[i] > s[j]) wins += 1.0;
      if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

// AP by direct enumeration of every cut: a cut keeps the first `k` items
// of the ranking (per_prediction) or every item scoring >= t (grouped).
double ap_by_enumeration(const std::vector<double>& s, const std::vector<int>& y, TieStrategy ties,
                         int64_t positives) {
  std::vector<size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return s[a] > s[b]; });
  std::vector<std::pair<double, double>> cuts;  // (recall, precision)
  if (ties == TieStrategy::per_prediction) {
    for (size_t k = 1; k <= order.size(); ++k) {
      int64_t tp = 0;
      for (size_t i = 0; i < k; ++i) tp += y[order[i]];
      cuts.emplace_back(double(tp) / double(positives), double(tp) / double(k));
    }
  } else {
    std::set<double, std::greater<>> thresholds(s.begin(), s.end());
    for (double t : thresholds) {
      int64_t tp = 0, kept = 0;
      for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] >= t) {
          ++kept;
          tp += y[i];
        }
      }
      cuts.emplace_back(double(tp) / double(positives), double(tp) / double(kept));
    }
  }
  double ap = 0, prev = 0;
  for (const auto& [r, p] : cuts) {
    ap += (r - prev) * p;
    prev = r;
  }
  return ap;
}

TEST(RocTest, Examples) {
  EXPECT_EQ(roc_auroc(std::vector<double>{0.9, 0.8, 0.3, 0.2}, std::vector<int>{1, 1, 0, 0}).auroc.value,
            1.0);
  EXPECT_EQ(roc_auroc(std::vector<double>{0.8, 0.8}, std::vector<int>{1, 0}).auroc.value, 0.5);
  const RocResult none = roc_auroc(std::vector<double>{0.8, 0.3}, std::vector<int>{1, 1});
  EXPECT_EQ(*none.auroc.nan_reason, NanReason::empty_set);
}

TEST(RocTest, CurveStartsAtOriginAndIsMonotone) {
  testing::Gen gen(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s;
    std::vector<int> y;
    for (int i = 0; i < gen.uniform_int(2, 15); ++i) {
      s.push_back(gen.grid_score(5));
      y.push_back(gen.uniform_int(0, 1));
    }
    const RocResult r = roc_auroc(s, y);
    const Curve& c = r.curve;
    if (!r.auroc.defined()) {
      EXPECT_TRUE(c.points.empty());
      continue;
    }
    EXPECT_EQ(c.points.front(), (CurvePoint{0.0, 0.0}));
    for (size_t i = 1; i < c.points.size(); ++i) {
      EXPECT_GE(c.points[i].x, c.points[i - 1].x);
      EXPECT_GE(c.points[i].y, c.points[i - 1].y);
    }
    EXPECT_EQ(c.points.size(), c.thresholds.size());
  }
}

TEST(RocTest, MatchesMannWhitneyOracle) {
  testing::Gen gen(32);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = gen.uniform_int(2, 12);
    std::vector<double> s;
    std::vector<int> y;
    for (int i = 0; i < n; ++i) {
      s.push_back(gen.grid_score(6));
      y.push_back(i == 0 ? 1 : (i == 1 ? 0 : gen.uniform_int(0, 1)));
    }
    EXPECT_EQ(roc_auroc(s, y).auroc.value, mann_whitney(s, y));
  }
}

TEST(RocTest, InvariantUnderIncreasingTransform) {
  testing::Gen gen(33);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s, cubed;
    std::vector<int> y = {1, 0};
    for (int i = 0; i < 10; ++i) {
      s.push_back(gen.grid_score(8));
      if (i >= 2) y.push_back(gen.uniform_int(0, 1));
    }
    for (double v : s) cubed.push_back(v * v * v);
    EXPECT_EQ(roc_auroc(s, y).auroc, roc_auroc(cubed, y).auroc);
    EXPECT_EQ(pr_ap(s, y, TieStrategy::grouped).ap, pr_ap(cubed, y, TieStrategy::grouped).ap);
  }
}

TEST(PartialAurocTest, Examples) {
  const Curve perfect = roc_auroc(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}).curve;
  EXPECT_DOUBLE_EQ(partial_auroc(perfect, 0.1, 0.4).value, 1.0);

  Curve chance;
  chance.points = {{0.0, 0.0}, {1.0, 1.0}};
  chance.thresholds = {1.0, 0.0};
  EXPECT_NEAR(partial_auroc(chance, 0.2, 0.6, PartialAucNormalization::none).value, 0.16, 1e-12);
  EXPECT_NEAR(partial_auroc(chance, 0.2, 0.6, PartialAucNormalization::width).value, 0.4, 1e-12);
  EXPECT_NEAR(partial_auroc(chance, 0.2, 0.6, PartialAucNormalization::standardized).value, 0.5, 1e-12);
  EXPECT_THROW(partial_auroc(chance, 0.6, 0.2), ParameterError);
}

TEST(PartialAurocTest, FullRangeIsAuroc) {
  testing::Gen gen(34);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s;
    std::vector<int> y = {1, 0};
    s.push_back(gen.uniform());
    s.push_back(gen.uniform());
    for (int i = 0; i < 8; ++i) {
      s.push_back(gen.grid_score(4));
      y.push_back(gen.uniform_int(0, 1));
    }
    const RocResult r = roc_auroc(s, y);
    EXPECT_NEAR(partial_auroc(r.curve, 0.0, 1.0).value, r.auroc.value, 1e-12);
  }
}

TEST(ApTest, Examples) {
  EXPECT_EQ(pr_ap(std::vector<double>{0.9, 0.8, 0.2}, std::vector<int>{1, 1, 0}, TieStrategy::grouped).ap.value,
            1.0);
  EXPECT_EQ(*pr_ap(std::vector<double>{0.9}, std::vector<int>{0}, TieStrategy::grouped).ap.nan_reason,
            NanReason::empty_set);
}

TEST(ApTest, DuplicateScoreTieStrategiesDiffer) {
  // Two predictions at 0.80, one hit and one miss, two references.
  const std::vector<double> s = {0.8, 0.8};
  const std::vector<int> y = {1, 0};
  const double per_pred = pr_ap(s, y, TieStrategy::per_prediction, 2).ap.value;
  const double grouped = pr_ap(s, y, TieStrategy::grouped, 2).ap.value;
  EXPECT_EQ(per_pred, ap_by_enumeration(s, y, TieStrategy::per_prediction, 2));
  EXPECT_EQ(grouped, ap_by_enumeration(s, y, TieStrategy::grouped, 2));
  EXPECT_NE(per_pred, grouped);
  EXPECT_DOUBLE_EQ(per_pred, 0.5);
  EXPECT_DOUBLE_EQ(grouped, 0.25);
}

TEST(ApTest, MatchesEnumerationOracle) {
  testing::Gen gen(35);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = gen.uniform_int(1, 10);
    std::vector<double> s;
    std::vector<int> y;
    for (int i = 0; i < n; ++i) {
      s.push_back(gen.grid_score(5));
      y.push_back(gen.uniform_int(0, 1));
    }
    const int64_t positives = std::count(y.begin(), y.end(), 1) + gen.uniform_int(0, 2);
    if (positives == 0) continue;
    for (TieStrategy t : {TieStrategy::per_prediction, TieStrategy::grouped}) {
      EXPECT_NEAR(pr_ap(s, y, t, positives).ap.value, ap_by_enumeration(s, y, t, positives), 1e-12);
    }
  }
}

TEST(ApTest, StrategiesAgreeOnDistinctScores) {
  testing::Gen gen(36);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s;
    std::vector<int> y = {1};
    s.push_back(gen.uniform());
    for (int i = 0; i < gen.uniform_int(0, 12); ++i) {
      s.push_back(gen.uniform());
      y.push_back(gen.uniform_int(0, 1));
    }
    EXPECT_EQ(pr_ap(s, y, TieStrategy::per_prediction).ap, pr_ap(s, y, TieStrategy::grouped).ap);
  }
}

ImageHits image(std::string id, int64_t refs, std::vector<ScoredHit> hits) {
  return {std::move(id), refs, std::move(hits)};
}

TEST(FrocTest, Examples) {
  const std::vector<ImageHits> perfect = {image("a", 1, {{0.9, true}})};
  EXPECT_EQ(froc(perfect, {0, 1}, true).score.value, 1.0);
  EXPECT_EQ(froc(perfect, {0, 4}, true).score.value, 1.0);

  const std::vector<ImageHits> fp_first = {image("a", 1, {{0.9, false}, {0.8, true}})};
  EXPECT_EQ(froc(fp_first, {0, 1}, true).score.value, 0.0);
  EXPECT_EQ(froc(fp_first, {0, 2}, true).score.value, 0.5);

  const std::vector<ImageHits> nothing = {image("a", 2, {})};
  EXPECT_EQ(froc(nothing, {0, 1}, true).score.value, 0.0);

  EXPECT_THROW(froc(perfect, {0, 0}, true), ParameterError);
}

TEST(FrocTest, UnnormalizedAreaScalesWithRange) {
  const std::vector<ImageHits> fp_first = {image("a", 1, {{0.9, false}, {0.8, true}})};
  EXPECT_EQ(froc(fp_first, {0, 2}, false).score.value, 1.0);
  EXPECT_EQ(froc(fp_first, {0, 4}, false).score.value, 3.0);
}

TEST(FrocTest, SensitivityNonDecreasingAndScoreBounded) {
  testing::Gen gen(37);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ImageHits> imgs;
    for (int i = 0; i < gen.uniform_int(1, 5); ++i) {
      ImageHits h{"img" + std::to_string(i), gen.uniform_int(0, 3), {}};
      int64_t tps = 0;
      for (int j = 0; j < gen.uniform_int(0, 5); ++j) {
        const bool tp = tps < h.num_refs && gen.coin();
        tps += tp;
        h.hits.push_back({gen.grid_score(5), tp});
      }
      imgs.push_back(std::move(h));
    }
    for (SensitivityMode mode : {SensitivityMode::pooled, SensitivityMode::per_image_averaged}) {
      const FrocResult r = froc(imgs, {0, 2}, true, mode);
      if (!r.score.defined()) continue;
      EXPECT_GE(r.score.value, 0.0);
      EXPECT_LE(r.score.value, 1.0);
      for (size_t i = 1; i < r.curve.points.size(); ++i) {
        EXPECT_GE(r.curve.points[i].x, r.curve.points[i - 1].x);
        EXPECT_GE(r.curve.points[i].y, r.curve.points[i - 1].y);
      }
    }
  }
}

TEST(WorkingPointTest, Examples) {
  const Curve perfect = roc_auroc(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}).curve;
  EXPECT_EQ(working_point(perfect, Axis::specificity, 0.9).value, 1.0);

  Curve chance;
  chance.points = {{0.0, 0.0}, {1.0, 1.0}};
  chance.thresholds = {1.0, 0.0};
  const WorkingPoint wp = working_point(chance, Axis::specificity, 0.7);
  EXPECT_NEAR(wp.value, 0.3, 1e-12);
  EXPECT_EQ(wp.value_axis, Axis::sensitivity);
  EXPECT_EQ(wp.threshold, 0.0);
  EXPECT_THROW(working_point(chance, Axis::fpr, 1.5), RangeError);
}

TEST(AxisTest, NamesRoundTrip) {
  for (Axis a : {Axis::fpr, Axis::sensitivity, Axis::specificity, Axis::recall, Axis::precision, Axis::fppi}) {
    EXPECT_EQ(axis_from_string(to_string(a)), a);
  }
  EXPECT_THROW(axis_from_string("tpr"), ParameterError);
}

}  // namespace
}  // namespace valmet
