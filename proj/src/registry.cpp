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

#include "valmet/registry.hpp"

#include <algorithm>
#include <cmath>

#include "valmet/metric_value.hpp"

namespace valmet {

std::string_view to_string(Task task) {
  switch (task) {
    case Task::ImLC: return "ImLC";
    case Task::SemS: return "SemS";
    case Task::ObD: return "ObD";
    case Task::InS: return "InS";
  }
  return "ImLC";
}

Task task_from_string(std::string_view name) {
  for (Task t : {Task::ImLC, Task::SemS, Task::ObD, Task::InS}) {
    if (to_string(t) == name) return t;
  }
  throw ParameterError("unknown task '" + std::string(name) + "'");
}

bool MetricInfo::valid_for(Task task) const {
  return std::find(tasks.begin(), tasks.end(), task) != tasks.end();
}

std::optional<double> MetricInfo::worst() const {
  switch (direction) {
    case Direction::higher_better: return lower;
    case Direction::lower_better: return upper;
    case Direction::closer_to_zero: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> MetricInfo::best() const {
  switch (direction) {
    case Direction::higher_better: return upper;
    case Direction::lower_better: return lower;
    case Direction::closer_to_zero: return 0.0;
  }
  return std::nullopt;
}

bool MetricInfo::better(double a, double b) const {
  switch (direction) {
    case Direction::higher_better: return a > b;
    case Direction::lower_better: return a < b;
    case Direction::closer_to_zero: return std::abs(a) < std::abs(b);
  }
  return false;
}

namespace {

std::vector<MetricInfo> build_registry() {
  using enum Task;
  using F = MetricFamily;
  const std::vector<Task> all = {ImLC, SemS, ObD, InS};
  const std::vector<Task> with_tn = {ImLC, SemS};
  const std::vector<Task> pixel = {SemS, InS};
  const std::vector<Task> objects = {ObD, InS};
  const auto H = Direction::higher_better;
  const auto L = Direction::lower_better;
  const std::optional<double> none;

  std::vector<MetricInfo> r;
  auto add = [&](std::string id, std::string name, Direction d, std::optional<double> lo,
                 std::optional<double> hi, F family, std::vector<Task> tasks,
                 bool scores = false, bool overlap = false) {
    r.push_back({std::move(id), std::move(name), d, lo, hi, family, std::move(tasks), scores,
                 overlap});
  };
  add("sensitivity", "Sensitivity", H, 0.0, 1.0, F::per_class_counting, all);
  add("specificity", "Specificity", H, 0.0, 1.0, F::per_class_counting, with_tn);
  add("ppv", "Positive Predictive Value", H, 0.0, 1.0, F::per_class_counting, all);
  add("npv", "Negative Predictive Value", H, 0.0, 1.0, F::per_class_counting, with_tn);
  add("f_beta", "F-beta Score", H, 0.0, 1.0, F::per_class_counting, all);
  add("lr_plus", "Positive Likelihood Ratio", H, 0.0, none, F::per_class_counting, {ImLC});
  add("net_benefit", "Net Benefit", H, none, 1.0, F::per_class_counting, {ImLC});
  add("accuracy", "Accuracy", H, 0.0, 1.0, F::multi_class_counting, {ImLC});
  add("balanced_accuracy", "Balanced Accuracy", H, 0.0, 1.0, F::multi_class_counting, {ImLC});
  add("youden_j", "Youden's Index J", H, -1.0, 1.0, F::multi_class_counting, {ImLC});
  add("mcc", "Matthews Correlation Coefficient", H, -1.0, 1.0, F::multi_class_counting, {ImLC});
  add("kappa", "Cohen's Kappa", H, -1.0, 1.0, F::multi_class_counting, {ImLC});
  add("weighted_kappa", "Weighted Cohen's Kappa", H, none, 1.0, F::multi_class_counting, {ImLC});
  add("expected_cost", "Expected Cost", L, 0.0, none, F::multi_class_counting, {ImLC});
  add("auroc", "Area under the ROC Curve", H, 0.0, 1.0, F::multi_threshold, {ImLC}, true);
  add("partial_auroc", "Partial AUROC", H, 0.0, 1.0, F::multi_threshold, {ImLC}, true);
  add("ap", "Average Precision", H, 0.0, 1.0, F::multi_threshold, {ImLC, ObD, InS}, true);
  add("froc_score", "FROC Score", H, 0.0, none, F::multi_threshold, objects, true);
  add("dsc", "Dice Similarity Coefficient", H, 0.0, 1.0, F::overlap, pixel, false, true);
  add("iou", "Intersection over Union", H, 0.0, 1.0, F::overlap, pixel, false, true);
  add("cl_dice", "Centerline Dice", H, 0.0, 1.0, F::overlap, pixel, false, true);
  add("boundary_iou", "Boundary IoU", H, 0.0, 1.0, F::boundary, pixel);
  add("nsd", "Normalized Surface Distance", H, 0.0, 1.0, F::boundary, pixel);
  add("hd", "Hausdorff Distance", L, 0.0, none, F::boundary, pixel);
  add("hd95", "Hausdorff Distance 95th Percentile", L, 0.0, none, F::boundary, pixel);
  add("assd", "Average Symmetric Surface Distance", L, 0.0, none, F::boundary, pixel);
  add("masd", "Mean Average Surface Distance", L, 0.0, none, F::boundary, pixel);
  add("volume_abs", "Absolute Volume Error", L, 0.0, none, F::volume, pixel);
  add("volume_rel", "Relative Volume Error", Direction::closer_to_zero, -1.0, none, F::volume, pixel);
  add("pq", "Panoptic Quality", H, 0.0, 1.0, F::instance, {InS});
  add("sq", "Segmentation Quality", H, 0.0, 1.0, F::instance, {InS});
  add("dq", "Detection Quality", H, 0.0, 1.0, F::instance, {InS});
  add("ece", "Expected Calibration Error", L, 0.0, 1.0, F::calibration, {ImLC}, true);
  add("mce", "Maximum Calibration Error", L, 0.0, 1.0, F::calibration, {ImLC}, true);
  add("cwce", "Class-wise Calibration Error", L, 0.0, 1.0, F::calibration, {ImLC}, true);
  add("canonical_ce", "Canonical Calibration Error", L, 0.0, 1.0, F::calibration, {ImLC}, true);
  add("brier", "Brier Score", L, 0.0, 2.0, F::calibration, {ImLC}, true);
  add("nll", "Negative Log Likelihood", L, 0.0, none, F::calibration, {ImLC}, true);
  return r;
}

}  // namespace

const std::vector<MetricInfo>& all_metrics() {
  static const std::vector<MetricInfo> registry = build_registry();
  return registry;
}

bool is_registered(std::string_view id) {
  const auto& r = all_metrics();
  return std::any_of(r.begin(), r.end(), [&](const MetricInfo& m) { return m.id == id; });
}

const MetricInfo& metric_info(std::string_view id) {
  for (const auto& m : all_metrics()) {
    if (m.id == id) return m;
  }
  throw ParameterError("unknown metric id '" + std::string(id) + "'");
}

}  // namespace valmet
