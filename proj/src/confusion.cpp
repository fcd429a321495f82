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

#include <numeric>

#include "valmet/metric_value.hpp"

namespace valmet {

void ClassScores::validate() const {
  if (scores.size() < 2) {
    throw ParameterError("item '" + item_id + "': need at least 2 class scores");
  }
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw ParameterError("item '" + item_id + "': score outside [0,1]");
    }
  }
  if (ref_class < 0 || ref_class >= num_classes()) {
    throw ParameterError("item '" + item_id + "': reference class out of range");
  }
}

MultiConfusion::MultiConfusion(int num_classes)
    : classes_(num_classes),
      counts_(static_cast<size_t>(num_classes < 0 ? 0 : num_classes) *
                  static_cast<size_t>(num_classes < 0 ? 0 : num_classes),
              0) {
  if (num_classes < 2) throw ParameterError("confusion matrix needs C >= 2");
}

MultiConfusion::MultiConfusion(int num_classes, std::vector<int64_t> row_major_counts)
    : MultiConfusion(num_classes) {
  if (row_major_counts.size() != counts_.size()) {
    throw ShapeError("confusion matrix expects C*C counts");
  }
  for (int64_t c : row_major_counts) {
    if (c < 0) throw ParameterError("confusion counts must be non-negative");
  }
  counts_ = std::move(row_major_counts);
}

size_t MultiConfusion::index(int ref, int pred) const {
  if (ref < 0 || ref >= classes_ || pred < 0 || pred >= classes_) {
    throw ParameterError("confusion matrix index out of range");
  }
  return static_cast<size_t>(ref) * static_cast<size_t>(classes_) +
         static_cast<size_t>(pred);
}

int64_t MultiConfusion::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), int64_t{0});
}

int64_t MultiConfusion::trace() const {
  int64_t t = 0;
  for (int k = 0; k < classes_; ++k) t += at(k, k);
  return t;
}

int64_t MultiConfusion::row_sum(int ref) const {
  int64_t s = 0;
  for (int j = 0; j < classes_; ++j) s += at(ref, j);
  return s;
}

int64_t MultiConfusion::col_sum(int pred) const {
  int64_t s = 0;
  for (int i = 0; i < classes_; ++i) s += at(i, pred);
  return s;
}

int argmax_class(std::span<const double> scores) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(scores.size()); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

std::vector<int> argmax_labels(std::span<const ClassScores> items) {
  std::vector<int> labels;
  labels.reserve(items.size());
  for (const auto& item : items) {
    item.validate();
    labels.push_back(argmax_class(item.scores));
  }
  return labels;
}

std::vector<int> threshold_scores(std::span<const ClassScores> items,
                                  double threshold, int positive_class) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ParameterError("threshold must lie in [0,1]");
  }
  std::vector<int> labels;
  labels.reserve(items.size());
  for (const auto& item : items) {
    item.validate();
    if (positive_class < 0 || positive_class >= item.num_classes()) {
      throw ParameterError("positive class out of range");
    }
    if (item.scores[positive_class] > threshold) {
      labels.push_back(positive_class);
      continue;
    }
    int best = -1;
    for (int k = 0; k < item.num_classes(); ++k) {
      if (k == positive_class) continue;
      if (best < 0 || item.scores[k] > item.scores[best]) best = k;
    }
    labels.push_back(best);
  }
  return labels;
}

BinaryConfusion threshold_binary(std::span<const double> scores,
                                 std::span<const int> labels, double threshold) {
  if (scores.size() != labels.size()) {
    throw ShapeError("scores and labels differ in length");
  }
  BinaryConfusion cm;
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool positive_pred = scores[i] > threshold;
    const bool positive_ref = labels[i] != 0;
    if (positive_ref) {
      positive_pred ? ++cm.tp : ++cm.fn;
    } else {
      positive_pred ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

BinaryConfusion confusion_binary(std::span<const int> ref_labels,
                                 std::span<const int> pred_labels,
                                 int positive_class) {
  if (ref_labels.size() != pred_labels.size()) {
    throw ShapeError("reference and prediction label lists differ in length");
  }
  BinaryConfusion cm;
  for (size_t i = 0; i < ref_labels.size(); ++i) {
    const bool r = ref_labels[i] == positive_class;
    const bool p = pred_labels[i] == positive_class;
    if (r) {
      p ? ++cm.tp : ++cm.fn;
    } else {
      p ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

MultiConfusion confusion_multi(std::span<const int> ref_labels,
                               std::span<const int> pred_labels, int num_classes) {
  if (ref_labels.size() != pred_labels.size()) {
    throw ShapeError("reference and prediction label lists differ in length");
  }
  MultiConfusion m(num_classes);
  for (size_t i = 0; i < ref_labels.size(); ++i) {
    const int r = ref_labels[i];
    const int p = pred_labels[i];
    if (r < 0 || r >= num_classes || p < 0 || p >= num_classes) {
      throw ParameterError("label out of range at position " + std::to_string(i));
    }
    ++m.at(r, p);
  }
  return m;
}

BinaryConfusion per_class_view(const MultiConfusion& m, int k) {
  if (k < 0 || k >= m.num_classes()) throw ParameterError("class out of range");
  BinaryConfusion cm;
  cm.tp = m.at(k, k);
  cm.fn = m.row_sum(k) - cm.tp;
  cm.fp = m.col_sum(k) - cm.tp;
  cm.tn = m.total() - cm.tp - cm.fn - cm.fp;
  return cm;
}

}  // namespace valmet
