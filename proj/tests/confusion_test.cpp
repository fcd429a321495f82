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

#include "valmet/confusion.hpp"

#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "valmet/metric_value.hpp"

namespace valmet {
namespace {

ClassScores binary_item(double positive_score) {
  return {"x", {1.0 - positive_score, positive_score}, 0};
}

TEST(ThresholdScoresTest, StrictlyAboveIsPositive) {
  const std::vector<ClassScores> items = {binary_item(0.7), binary_item(0.5), binary_item(0.2)};
  EXPECT_EQ(threshold_scores(items, 0.5, 1), (std::vector<int>{1, 0, 0}));
}

TEST(ThresholdScoresTest, MultiClassFallsBackToArgmaxOfRest) {
  const std::vector<ClassScores> items = {{"a", {0.3, 0.4, 0.3}, 0}, {"b", {0.2, 0.6, 0.5}, 0}};
  // Class 1 is positive only above 0.5; item a goes to the lowest-index max of {0, 2}.
  EXPECT_EQ(threshold_scores(items, 0.5, 1), (std::vector<int>{0, 1}));
}

TEST(ThresholdScoresTest, RejectsBadArguments) {
  const std::vector<ClassScores> items = {binary_item(0.7)};
  EXPECT_THROW(threshold_scores(items, 0.5, 2), ParameterError);
  EXPECT_THROW(threshold_scores(items, 1.5, 1), ParameterError);
}

TEST(ThresholdBinaryTest, SeparableExample) {
  const std::vector<double> scores = {0.9, 0.8, 0.3, 0.2};
  const std::vector<int> labels = {1, 1, 0, 0};
  EXPECT_EQ(threshold_binary(scores, labels, 0.5), (BinaryConfusion{2, 0, 0, 2}));
}

TEST(ConfusionMultiTest, Examples) {
  const MultiConfusion id = confusion_multi(std::vector<int>{0, 1, 2}, std::vector<int>{0, 1, 2}, 3);
  EXPECT_EQ(id, MultiConfusion(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));

  const MultiConfusion total = confusion_multi(std::vector<int>{0, 0}, std::vector<int>{1, 1}, 2);
  EXPECT_EQ(total, MultiConfusion(2, {0, 2, 0, 0}));

  const MultiConfusion m =
      confusion_multi(std::vector<int>{0, 1, 1, 0}, std::vector<int>{0, 1, 0, 0}, 2);
  EXPECT_EQ(m, MultiConfusion(2, {2, 0, 1, 1}));
  EXPECT_EQ(per_class_view(m, 1), (BinaryConfusion{1, 1, 0, 2}));
  EXPECT_EQ(per_class_view(id, 0), (BinaryConfusion{1, 0, 0, 2}));
}

TEST(ConfusionMultiTest, Errors) {
  EXPECT_THROW(confusion_multi(std::vector<int>{0}, std::vector<int>{0, 1}, 2), ShapeError);
  EXPECT_THROW(confusion_multi(std::vector<int>{0}, std::vector<int>{2}, 2), ParameterError);
  EXPECT_THROW(per_class_view(MultiConfusion(2), 2), ParameterError);
  EXPECT_THROW(MultiConfusion(1), ParameterError);
}

TEST(ClassScoresTest, Validate) {
  EXPECT_NO_THROW((ClassScores{"a", {0.9, 0.9}, 1}.validate()));
  EXPECT_THROW((ClassScores{"a", {1.0}, 0}.validate()), ParameterError);
  EXPECT_THROW((ClassScores{"a", {1.2, 0.0}, 0}.validate()), ParameterError);
  EXPECT_THROW((ClassScores{"a", {0.5, 0.5}, 2}.validate()), ParameterError);
}

TEST(ConfusionPropertyTest, ViewsPartitionTotalAndTraceIsSumOfTp) {
  testing::Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int c = gen.uniform_int(2, 6);
    const MultiConfusion m = gen.multi_confusion(c);
    int64_t tp_sum = 0;
    for (int k = 0; k < c; ++k) {
      const BinaryConfusion v = per_class_view(m, k);
      EXPECT_EQ(v.total(), m.total());
      tp_sum += v.tp;
    }
    EXPECT_EQ(tp_sum, m.trace());
  }
}

TEST(ConfusionPropertyTest, TwoClassViewMatchesDirectBinary) {
  testing::Gen gen(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.uniform_int(0, 30);
    std::vector<int> ref, pred;
    for (int i = 0; i < n; ++i) {
      ref.push_back(gen.uniform_int(0, 1));
      pred.push_back(gen.uniform_int(0, 1));
    }
    const MultiConfusion m = confusion_multi(ref, pred, 2);
    EXPECT_EQ(per_class_view(m, 1), confusion_binary(ref, pred, 1));
    EXPECT_EQ(per_class_view(m, 0), confusion_binary(ref, pred, 0));
  }
}

TEST(ConfusionPropertyTest, ThresholdIsMonotone) {
  testing::Gen gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto items = gen.class_scores(gen.uniform_int(1, 20), gen.uniform_int(2, 4));
    const double t1 = gen.uniform(), t2 = gen.uniform();
    const double lo = std::min(t1, t2), hi = std::max(t1, t2);
    const auto a = threshold_scores(items, lo, 1);
    const auto b = threshold_scores(items, hi, 1);
    for (size_t i = 0; i < items.size(); ++i) {
      if (a[i] != 1) {
        EXPECT_NE(b[i], 1);
      }
    }
  }
}

TEST(ArgmaxTest, LowestIndexWinsTies) {
  EXPECT_EQ(argmax_class(std::vector<double>{0.4, 0.4, 0.2}), 0);
  EXPECT_EQ(argmax_class(std::vector<double>{0.1, 0.3, 0.3}), 1);
}

}  // namespace
}  // namespace valmet
