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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "valmet/aggregation.hpp"
#include "valmet/calibration.hpp"
#include "valmet/curves.hpp"
#include "valmet/detection.hpp"
#include "valmet/io.hpp"
#include "valmet/linter.hpp"
#include "valmet/registry.hpp"

namespace valmet {

/// One requested metric with its hyperparameters. Fields a metric does
/// not use are ignored and not echoed.
struct MetricSpec {
  std::string id;
  double beta = 1.0;                  // f_beta
  double tau = 1.0;                   // nsd tolerance
  double d = 1.0;                     // boundary_iou band width
  double percentile = 95.0;           // hd95
  double threshold_probability = 0.5; // net_benefit
  std::string weights = "linear";     // weighted_kappa: linear | quadratic
  std::vector<double> costs;          // expected_cost, C*C row-major; empty = 0/1
  std::vector<double> priors;         // expected_cost; empty = empirical
  double lo = 0.0;                    // partial_auroc FPR range
  double hi = 1.0;
  PartialAucNormalization normalization = PartialAucNormalization::width;
  TieStrategy ties = TieStrategy::grouped;  // ap on classification scores
};

struct EvaluationConfig {
  Task task = Task::ImLC;
  std::optional<uint64_t> seed;
  std::optional<int> num_classes;
  int positive_class = 1;

  /// Input paths as written in the file and resolved against its folder.
  InputPaths inputs_raw;
  InputPaths inputs;

  std::vector<MetricSpec> metrics;

  ThresholdPolicy threshold_policy = ThresholdPolicy::global;
  double threshold = 0.5;
  std::vector<double> class_thresholds;  // per_class policy

  LocalizationCriterion localization;
  AssignmentStrategy assignment = AssignmentStrategy::greedy_by_score;
  PanopticMode panoptic = PanopticMode::strict;

  std::optional<FppiRange> fppi_range;
  bool froc_normalize = true;
  SensitivityMode sensitivity_mode = SensitivityMode::pooled;

  std::optional<BinningScheme> binning;

  AggregateOperator op = AggregateOperator::mean;
  std::vector<std::string> grouping;
  std::optional<MissingPolicy> missing_policy;
  bool per_class = false;
  std::vector<std::string> stratify_by;

  bool ranking = false;
  bool rank_normalized = false;

  DatasetDeclarations declarations;
  LinterConfig linter;

  bool has_metric(std::string_view id) const;
  const MetricSpec* metric(std::string_view id) const;
  MissingPolicy effective_missing_policy() const {
    return missing_policy.value_or(MissingPolicy::ignore);
  }
  FppiRange effective_fppi_range() const { return fppi_range.value_or(FppiRange{}); }
  BinningScheme effective_binning() const { return binning.value_or(BinningScheme{}); }

  MetricSelection selection() const;
  /// Task consistency: every metric must be computable for the task.
  void validate_for_run() const;
};

/// Parses the JSON configuration. Relative input paths resolve against
/// `base_dir`. Throws ParameterError on schema violations.
EvaluationConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
EvaluationConfig load_config(const std::filesystem::path& path);

/// Canonical JSON of the configuration with defaults filled in; parsing
/// it again yields the same configuration.
std::string config_to_json(const EvaluationConfig& config);

}  // namespace valmet
