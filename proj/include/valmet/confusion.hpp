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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace valmet {

/// Predicted class scores of one item together with its reference class.
/// Scores need not sum to one.
struct ClassScores {
  std::string item_id;
  std::vector<double> scores;
  int ref_class = 0;

  int num_classes() const { return static_cast<int>(scores.size()); }
  /// Throws ParameterError unless C >= 2, scores in [0,1], ref in [0,C).
  void validate() const;
};

struct BinaryConfusion {
  int64_t tp = 0;
  int64_t fn = 0;
  int64_t fp = 0;
  int64_t tn = 0;

  int64_t total() const { return tp + fn + fp + tn; }
  int64_t positives() const { return tp + fn; }
  int64_t negatives() const { return fp + tn; }

  friend bool operator==(const BinaryConfusion&, const BinaryConfusion&) = default;
};

/// C x C count matrix; rows are reference classes, columns predictions.
class MultiConfusion {
 public:
  explicit MultiConfusion(int num_classes);
  MultiConfusion(int num_classes, std::vector<int64_t> row_major_counts);

  int num_classes() const { return classes_; }
  int64_t at(int ref, int pred) const { return counts_[index(ref, pred)]; }
  int64_t& at(int ref, int pred) { return counts_[index(ref, pred)]; }

  int64_t total() const;
  int64_t trace() const;
  int64_t row_sum(int ref) const;
  int64_t col_sum(int pred) const;
  const std::vector<int64_t>& counts() const { return counts_; }

  friend bool operator==(const MultiConfusion&, const MultiConfusion&) = default;

 private:
  size_t index(int ref, int pred) const;

  int classes_;
  std::vector<int64_t> counts_;
};

/// Hard labels from scores: positive_class when its score is strictly above
/// threshold, otherwise the arg-max over the remaining classes (lowest index
/// wins ties). For two classes that is the complement class.
std::vector<int> threshold_scores(std::span<const ClassScores> items,
                                  double threshold, int positive_class);

/// Arg-max prediction with lowest-class-index tie-break.
int argmax_class(std::span<const double> scores);
std::vector<int> argmax_labels(std::span<const ClassScores> items);

/// Binary confusion of scalar positive-class scores against 0/1 labels,
/// positive iff score > threshold.
BinaryConfusion threshold_binary(std::span<const double> scores,
                                 std::span<const int> labels, double threshold);

/// Binary confusion of hard labels, `positive_class` vs rest.
BinaryConfusion confusion_binary(std::span<const int> ref_labels,
                                 std::span<const int> pred_labels,
                                 int positive_class);

MultiConfusion confusion_multi(std::span<const int> ref_labels,
                               std::span<const int> pred_labels, int num_classes);

/// One-vs-rest view with class k as the positive class.
BinaryConfusion per_class_view(const MultiConfusion& m, int k);

}  // namespace valmet
