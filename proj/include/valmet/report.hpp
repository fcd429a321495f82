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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "valmet/aggregation.hpp"
#include "valmet/curves.hpp"
#include "valmet/linter.hpp"

namespace valmet {

inline constexpr std::string_view kEngineName = "valmet";
inline constexpr std::string_view kEngineVersion = "0.1.0";

/// Item id of records computed over the whole dataset rather than one item.
inline constexpr std::string_view kDatasetItem = "(dataset)";

struct CurveRecord {
  std::string name;  // roc | pr | froc
  std::optional<int> class_id;
  Curve curve;
  std::string area_metric;  // registry id of the area value
  MetricValue area;
};

/// Everything derived from records by the aggregation engine, keyed by
/// metric id.
struct AggregationSection {
  std::map<std::string, AggregateNode> aggregates;
  std::map<std::string, PerClassSummary> per_class;
  std::map<std::string, std::vector<StratifiedSummary>> stratified;
  std::map<std::string, std::vector<RankEntry>> rankings;
};

struct Report {
  std::string engine_version = std::string(kEngineVersion);
  std::string config_json;  // canonical config echo
  std::vector<PitfallWarning> warnings;
  std::vector<MetricRecord> records;  // canonical order
  AggregationSection aggregation;
  std::vector<CurveRecord> curves;
};

/// Canonical record order: item, class (absent first), metric.
void sort_records(std::vector<MetricRecord>& records);

/// Self-describing JSON. Numbers are written in the shortest form that
/// parses back to the same double; NaN values are null with a
/// "nan_reason"; infinities are the strings "inf" and "-inf".
std::string report_to_json(const Report& report);
Report report_from_json(std::string_view text);

/// Only the curve section, for the `curves` command.
std::string curves_to_json(const std::vector<CurveRecord>& curves);

std::string records_to_jsonl(const std::vector<MetricRecord>& records);
/// One MetricRecord object per line, as written by records_to_jsonl or
/// found in a report's "records" list.
std::vector<MetricRecord> records_from_jsonl(std::string_view text, std::string_view source = "<jsonl>");

/// Aggregation section alone, for the `aggregate` command.
std::string aggregation_to_json(const AggregationSection& section);

}  // namespace valmet
