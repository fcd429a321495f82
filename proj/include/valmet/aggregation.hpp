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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "valmet/metric_value.hpp"

namespace valmet {

/// Raised when a missing-value policy forbids the NaNs it meets, or when
/// records lack the metadata a grouping needs.
class AggregationError : public Error {
 public:
  using Error::Error;
};

struct MetricRecord {
  std::string item_id;
  std::optional<int> class_id;
  std::string metric_id;
  MetricValue value;
  std::map<std::string, std::string> metadata;

  /// Throws unless the metric id is registered and metadata keys are non-empty.
  void validate() const;
};

enum class AggregateOperator { mean, median };
enum class MissingPolicy { ignore, worst_value, best_value, error };

std::string_view to_string(AggregateOperator op);
AggregateOperator aggregate_operator_from_string(std::string_view name);
std::string_view to_string(MissingPolicy policy);
MissingPolicy missing_policy_from_string(std::string_view name);

/// Reduces values of one metric. NaNs are handled by `policy`; worst/best
/// substitution throws AggregationError for metrics unbounded in that
/// direction. The median of an even count is the lower middle element.
/// `context` names the offending entries in error messages.
MetricValue reduce_values(std::span<const MetricValue> values, AggregateOperator op,
                          MissingPolicy policy, std::string_view metric_id,
                          std::string_view context = {});

struct AggregateNode {
  std::string key;    // grouping key of this level ("" at the root)
  std::string label;  // group value ("all" at the root)
  MetricValue value;
  int64_t n_records = 0;
  int64_t n_missing = 0;  // NaN inputs met by this node's reduction
  std::vector<AggregateNode> children;
};

/// Hierarchical aggregation of records of a single metric: records are
/// reduced inside the innermost group first, then group values outward.
/// Grouping keys are "class", "item" or metadata keys.
AggregateNode aggregate(std::span<const MetricRecord> records, AggregateOperator op,
                        std::span<const std::string> grouping, MissingPolicy policy);

/// Splits by metric id (sorted) and aggregates each.
std::map<std::string, AggregateNode> aggregate_by_metric(std::span<const MetricRecord> records,
                                                         AggregateOperator op,
                                                         std::span<const std::string> grouping,
                                                         MissingPolicy policy);

struct GroupValue {
  std::string label;
  MetricValue value;
  int64_t n_records = 0;
};

struct PerClassSummary {
  std::vector<GroupValue> per_class;  // label = class id
  MetricValue macro;                  // mean over present classes
  MetricValue pooled;                 // one reduction over all records
  std::vector<int> absent_classes;
};

PerClassSummary per_class_summary(std::span<const MetricRecord> records, AggregateOperator op,
                                  MissingPolicy policy,
                                  std::optional<std::vector<int>> expected_classes = std::nullopt);

struct StratifiedSummary {
  std::string key;
  std::vector<GroupValue> strata;
  MetricValue overall;
  MetricValue max_gap;
};

StratifiedSummary stratify(std::span<const MetricRecord> records, const std::string& key,
                           AggregateOperator op, MissingPolicy policy);

struct ConditionalSummary {
  MetricValue unconditional;
  MetricValue present;
  MetricValue absent;
};

/// Target-class metric conditioned on whether `conditioning_class` occurs in
/// each item's reference. `presence` maps item id to reference classes.
ConditionalSummary conditional_on_presence(
    std::span<const MetricRecord> records, int target_class, int conditioning_class,
    const std::map<std::string, std::set<int>>& presence, AggregateOperator op,
    MissingPolicy policy);

enum class RankOrder { aggregate_then_rank, rank_then_aggregate };

std::string_view to_string(RankOrder order);
RankOrder rank_order_from_string(std::string_view name);

struct RankScheme {
  RankOrder order = RankOrder::aggregate_then_rank;
  AggregateOperator op = AggregateOperator::mean;
};

struct RankEntry {
  std::string algorithm;
  double score = 0.0;  // aggregate metric value, or aggregated rank
  int rank = 0;        // 1-based; ties share the smallest rank
};

/// Ranks algorithms evaluated on the same items. Sorted by rank, then name.
std::vector<RankEntry> rank(const std::map<std::string, std::vector<MetricRecord>>& per_algorithm,
                            const RankScheme& scheme, MissingPolicy policy = MissingPolicy::ignore);

}  // namespace valmet
