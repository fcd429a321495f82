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

#include <optional>
#include <span>
#include <vector>

#include "valmet/confusion.hpp"
#include "valmet/metric_value.hpp"

namespace valmet {

/// Square non-negative weight/cost matrix, row-major, rows = reference.
class CostMatrix {
 public:
  explicit CostMatrix(int num_classes);  // zero diagonal, ones elsewhere
  CostMatrix(int num_classes, std::vector<double> row_major);

  /// c_ij = |i - j|.
  static CostMatrix ordinal(int num_classes);
  /// c_ij = ((i - j) / (C - 1))^2.
  static CostMatrix quadratic(int num_classes);

  int num_classes() const { return classes_; }
  double at(int i, int j) const {
    return values_[static_cast<size_t>(i) * classes_ + static_cast<size_t>(j)];
  }

 private:
  int classes_;
  std::vector<double> values_;
};

struct PerClassRates {
  MetricValue sensitivity;
  MetricValue specificity;
  MetricValue ppv;
  MetricValue npv;
};

PerClassRates per_class_rates(const BinaryConfusion& cm);

MetricValue sensitivity(const BinaryConfusion& cm);
MetricValue specificity(const BinaryConfusion& cm);
MetricValue ppv(const BinaryConfusion& cm);
MetricValue npv(const BinaryConfusion& cm);
MetricValue accuracy(const BinaryConfusion& cm);

/// (1+b^2) tp / ((1+b^2) tp + b^2 fn + fp); NaN when tp+fn+fp == 0.
MetricValue f_beta(const BinaryConfusion& cm, double beta = 1.0);

/// Sensitivity / (1 - specificity).
MetricValue lr_plus(const BinaryConfusion& cm);

struct PredictiveValues {
  MetricValue ppv;
  MetricValue npv;
};

/// Predictive values re-weighted to a target prevalence.
PredictiveValues prevalence_corrected_pv(double sens, double spec, double prevalence);

struct MultiClassSummary {
  MetricValue accuracy;
  MetricValue balanced_accuracy;
  MetricValue youden_j;
  /// Classes without reference items; excluded from the balanced accuracy.
  std::vector<int> excluded_classes;
};

MultiClassSummary multiclass_summary(const MultiConfusion& m);

/// Matthews correlation; the C x C form is Gorodkin's R_K statistic.
MetricValue mcc(const MultiConfusion& m);
MetricValue mcc(const BinaryConfusion& cm);

/// Cohen's kappa, optionally weighted by a disagreement weight matrix.
MetricValue kappa(const MultiConfusion& m,
                  const std::optional<CostMatrix>& weights = std::nullopt);

struct ExpectedCost {
  MetricValue value;
  std::vector<int> excluded_classes;
};

/// sum_i prior_i sum_j c_ij counts_ij / row_i. Priors default to the
/// empirical prevalence; rows without items are excluded and flagged.
ExpectedCost expected_cost(const MultiConfusion& m, const CostMatrix& costs,
                           std::optional<std::span<const double>> priors = std::nullopt);

/// tp/n - fp/n * pt/(1-pt).
MetricValue net_benefit(const BinaryConfusion& cm, double threshold_probability);

}  // namespace valmet
