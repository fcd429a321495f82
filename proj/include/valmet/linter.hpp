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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "valmet/dataset.hpp"
#include "valmet/registry.hpp"

namespace valmet {

/// Structure sizes of one class, in pixels.
struct SizeStats {
  int64_t n_structures = 0;
  double min = 0.0;
  double median = 0.0;  // lower middle for even counts
  double cv = 0.0;      // population std / mean
};

/// Metadata keys the user declared as hierarchy levels or strata.
struct DatasetDeclarations {
  std::vector<std::string> hierarchy_keys;
  std::vector<std::string> strata_keys;
  bool class_hierarchy = false;
};

struct DatasetFingerprint {
  Task task = Task::ImLC;
  int64_t n_items = 0;
  int num_classes = 2;
  /// Share of reference occurrences per class; classes without references
  /// are absent.
  std::map<int, double> class_prevalences;
  bool has_scores = false;
  int64_t empty_reference_count = 0;
  int64_t empty_prediction_count = 0;
  std::map<int, SizeStats> structure_sizes;  // pixel tasks only
  std::vector<std::string> hierarchy_keys;   // declared and present
  std::vector<std::string> strata_keys;      // declared and present
  bool class_hierarchy = false;

  /// Largest over smallest prevalence; 1 with fewer than two classes.
  double prevalence_ratio() const;
};

/// Prevalences count items (ImLC), reference pixels (SemS), reference
/// objects (ObD) or instances (InS). Structure sizes are 8-connected
/// component pixel counts of each reference class.
DatasetFingerprint fingerprint(const Dataset& dataset, const DatasetDeclarations& decl = {});

enum class ThresholdPolicy { global, per_class };

std::string_view to_string(ThresholdPolicy p);
ThresholdPolicy threshold_policy_from_string(std::string_view name);

/// What the user asked for, reduced to the facts the rules inspect.
struct MetricSelection {
  std::vector<std::string> metrics;
  bool fppi_range_explicit = false;
  bool binning_explicit = false;
  bool missing_policy_explicit = false;
  std::vector<std::string> grouping;
  bool per_class_report = false;
  std::vector<std::string> stratify_by;
  bool ranking = false;
  bool rank_normalized = false;
  ThresholdPolicy threshold_policy = ThresholdPolicy::global;
};

/// Trigger thresholds. The defaults are engineering choices of this tool.
struct LinterConfig {
  double imbalance_ratio = 10.0;
  int64_t small_test_set = 100;
  double small_structure_px = 10.0;
  double size_cv = 1.0;
  /// Report error findings without failing the run.
  bool warn_only = false;
};

enum class Severity { info, warn, error };

std::string_view to_string(Severity s);
Severity severity_from_string(std::string_view name);

struct PitfallWarning {
  std::string code;  // P1, P2.1 ... P3.5
  std::string rule;
  Severity severity = Severity::warn;
  std::string message;
  std::map<std::string, std::string> features;
  std::string anchor;  // key into anchor_table()

  friend bool operator==(const PitfallWarning&, const PitfallWarning&) = default;
};

/// Topic key -> short description of the pitfall it documents.
const std::map<std::string, std::string>& anchor_table();

/// Every (code, rule) pair the linter can emit, sorted.
std::vector<std::pair<std::string, std::string>> lint_rules();

/// Warnings sorted by (code, rule). Throws ParameterError on unknown ids.
std::vector<PitfallWarning> lint(const DatasetFingerprint& fp, const MetricSelection& sel,
                                 const LinterConfig& config = {});

bool has_blocking(const std::vector<PitfallWarning>& warnings, const LinterConfig& config);

/// One line per warning: "code rule severity anchor: message [k=v, ...]".
std::string format_warnings(const std::vector<PitfallWarning>& warnings);

}  // namespace valmet
