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

#include <string>
#include <vector>

#include "valmet/config.hpp"
#include "valmet/dataset.hpp"
#include "valmet/linter.hpp"
#include "valmet/report.hpp"

namespace valmet {

/// The linter found an error-severity pitfall and the configuration does
/// not ask for warn-only mode.
class LintFailure : public Error {
 public:
  explicit LintFailure(std::vector<PitfallWarning> warnings);
  const std::vector<PitfallWarning>& warnings() const { return warnings_; }

 private:
  std::vector<PitfallWarning> warnings_;
};

/// A metric or aggregation step failed; `module` names where.
class EvaluationError : public Error {
 public:
  EvaluationError(std::string module, const std::string& message);
  const std::string& module() const { return module_; }

 private:
  std::string module_;
};

Dataset load_dataset(const EvaluationConfig& config);

std::vector<PitfallWarning> lint_dataset(const EvaluationConfig& config, const Dataset& dataset);

/// Per-item and dataset-level metric records, canonically sorted. Items
/// are evaluated in parallel.
std::vector<MetricRecord> evaluate_records(const EvaluationConfig& config, const Dataset& dataset,
                                           std::vector<CurveRecord>* curves = nullptr);

/// Threshold curves (ROC/PR per class, or dataset PR and FROC).
std::vector<CurveRecord> evaluate_curves(const EvaluationConfig& config, const Dataset& dataset);

/// Hierarchical, per-class and stratified aggregates of per-item records.
AggregationSection aggregate_records(const std::vector<MetricRecord>& records,
                                     AggregateOperator op, const std::vector<std::string>& grouping,
                                     MissingPolicy policy, bool per_class,
                                     const std::vector<std::string>& stratify_by);

/// lint -> evaluate -> aggregate. Throws LintFailure before evaluating when
/// the linter blocks.
Report run(const EvaluationConfig& config, const Dataset& dataset);
Report run(const EvaluationConfig& config);

}  // namespace valmet
