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
#include <string>
#include <string_view>
#include <vector>

namespace valmet {

enum class Task { ImLC, SemS, ObD, InS };

std::string_view to_string(Task task);
Task task_from_string(std::string_view name);

enum class Direction { higher_better, lower_better, closer_to_zero };

enum class MetricFamily {
  per_class_counting,
  multi_class_counting,
  multi_threshold,
  overlap,
  boundary,
  volume,
  instance,
  calibration,
};

struct MetricInfo {
  std::string id;
  std::string name;
  Direction direction = Direction::higher_better;
  std::optional<double> lower;  // nullopt = unbounded below
  std::optional<double> upper;  // nullopt = unbounded above
  MetricFamily family = MetricFamily::per_class_counting;
  std::vector<Task> tasks;
  bool requires_scores = false;
  /// DSC-like overlap metric, sensitive to structure size.
  bool overlap_like = false;

  bool valid_for(Task task) const;
  bool bounded() const { return lower.has_value() && upper.has_value(); }
  /// Worst / best attainable value; nullopt when unbounded in that direction.
  std::optional<double> worst() const;
  std::optional<double> best() const;
  /// True when `a` is strictly better than `b`.
  bool better(double a, double b) const;
};

/// Every metric id the engine knows, in a fixed order.
const std::vector<MetricInfo>& all_metrics();
bool is_registered(std::string_view id);
/// Throws ParameterError for unknown ids.
const MetricInfo& metric_info(std::string_view id);

}  // namespace valmet
