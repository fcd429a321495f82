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

#include "valmet/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "valmet/registry.hpp"

namespace valmet {

namespace {

constexpr std::string_view kClassKey = "class";
constexpr std::string_view kItemKey = "item";

bool canonical_less(const MetricRecord& a, const MetricRecord& b) {
  const auto ka = std::tie(a.item_id, a.class_id, a.metric_id, a.metadata);
  const auto kb = std::tie(b.item_id, b.class_id, b.metric_id, b.metadata);
  if (ka != kb) return ka < kb;
  if (a.value.defined() != b.value.defined()) return !a.value.defined();
  return a.value.defined() && a.value.value < b.value.value;
}

std::vector<MetricRecord> canonical(std::span<const MetricRecord> records) {
  std::vector<MetricRecord> out(records.begin(), records.end());
  std::stable_sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::string describe(const MetricRecord& r) {
  std::string s = "item '" + r.item_id + "'";
  if (r.class_id) s += " class " + std::to_string(*r.class_id);
  return s;
}

std::string group_value(const MetricRecord& r, const std::string& key) {
  if (key == kClassKey) {
    if (!r.class_id) throw AggregationError("record " + describe(r) + " has no class id");
    return std::to_string(*r.class_id);
  }
  if (key == kItemKey) return r.item_id;
  const auto it = r.metadata.find(key);
  if (it == r.metadata.end()) {
    throw AggregationError("record " + describe(r) + " lacks metadata key '" + key + "'");
  }
  return it->second;
}

std::string single_metric(std::span<const MetricRecord> records) {
  if (records.empty()) return {};
  const std::string& id = records.front().metric_id;
  for (const auto& r : records) {
    if (r.metric_id != id) {
      throw ParameterError("records mix metrics '" + id + "' and '" + r.metric_id + "'");
    }
  }
  return id;
}

MetricValue reduce_records(const std::vector<const MetricRecord*>& recs, AggregateOperator op,
                           MissingPolicy policy, const std::string& metric_id,
                           int64_t* n_missing) {
  std::vector<MetricValue> values;
  values.reserve(recs.size());
  std::string missing;
  for (const auto* r : recs) {
    values.push_back(r->value);
    if (!r->value) {
      ++*n_missing;
      if (!missing.empty()) missing += ", ";
      missing += describe(*r);
    }
  }
  return reduce_values(values, op, policy, metric_id, missing);
}

AggregateNode build(const std::vector<const MetricRecord*>& recs, size_t level,
                    std::span<const std::string> grouping, AggregateOperator op,
                    MissingPolicy policy, const std::string& metric_id) {
  AggregateNode node;
  node.n_records = static_cast<int64_t>(recs.size());
  if (level == grouping.size()) {
    node.value = reduce_records(recs, op, policy, metric_id, &node.n_missing);
    return node;
  }
  const std::string& key = grouping[level];
  std::map<std::string, std::vector<const MetricRecord*>> groups;
  for (const auto* r : recs) groups[group_value(*r, key)].push_back(r);
  std::vector<MetricValue> child_values;
  std::string missing;
  for (auto& [label, members] : groups) {
    AggregateNode child = build(members, level + 1, grouping, op, policy, metric_id);
    child.key = key;
    child.label = label;
    child_values.push_back(child.value);
    if (!child.value) {
      ++node.n_missing;
      if (!missing.empty()) missing += ", ";
      missing += key + " '" + label + "'";
    }
    node.children.push_back(std::move(child));
  }
  node.value = reduce_values(child_values, op, policy, metric_id, missing);
  return node;
}

std::vector<const MetricRecord*> pointers(const std::vector<MetricRecord>& recs) {
  std::vector<const MetricRecord*> out;
  out.reserve(recs.size());
  for (const auto& r : recs) out.push_back(&r);
  return out;
}

}  // namespace

void MetricRecord::validate() const {
  metric_info(metric_id);
  for (const auto& [k, v] : metadata) {
    if (k.empty()) throw ParameterError("record " + describe(*this) + " has an empty metadata key");
  }
}

std::string_view to_string(AggregateOperator op) {
  return op == AggregateOperator::mean ? "mean" : "median";
}

AggregateOperator aggregate_operator_from_string(std::string_view name) {
  if (name == "mean") return AggregateOperator::mean;
  if (name == "median") return AggregateOperator::median;
  throw ParameterError("unknown aggregation operator '" + std::string(name) + "'");
}

std::string_view to_string(MissingPolicy policy) {
  switch (policy) {
    case MissingPolicy::ignore: return "ignore";
    case MissingPolicy::worst_value: return "worst_value";
    case MissingPolicy::best_value: return "best_value";
    case MissingPolicy::error: return "error";
  }
  return "ignore";
}

MissingPolicy missing_policy_from_string(std::string_view name) {
  for (auto p : {MissingPolicy::ignore, MissingPolicy::worst_value, MissingPolicy::best_value,
                 MissingPolicy::error}) {
    if (to_string(p) == name) return p;
  }
  throw ParameterError("unknown missing-value policy '" + std::string(name) + "'");
}

std::string_view to_string(RankOrder order) {
  return order == RankOrder::aggregate_then_rank ? "aggregate_then_rank" : "rank_then_aggregate";
}

RankOrder rank_order_from_string(std::string_view name) {
  if (name == "aggregate_then_rank") return RankOrder::aggregate_then_rank;
  if (name == "rank_then_aggregate") return RankOrder::rank_then_aggregate;
  throw ParameterError("unknown rank scheme '" + std::string(name) + "'");
}

MetricValue reduce_values(std::span<const MetricValue> values, AggregateOperator op,
                          MissingPolicy policy, std::string_view metric_id,
                          std::string_view context) {
  std::vector<double> xs;
  xs.reserve(values.size());
  for (const auto& v : values) {
    if (v) {
      xs.push_back(v.value);
      continue;
    }
    switch (policy) {
      case MissingPolicy::ignore:
        break;
      case MissingPolicy::error:
        throw AggregationError("missing values for metric '" + std::string(metric_id) +
                               "' under the error policy: " + std::string(context));
      case MissingPolicy::worst_value:
      case MissingPolicy::best_value: {
        const auto& info = metric_info(metric_id);
        const auto sub = policy == MissingPolicy::worst_value ? info.worst() : info.best();
        if (!sub) {
          throw AggregationError("metric '" + std::string(metric_id) + "' has no finite " +
                                 (policy == MissingPolicy::worst_value ? "worst" : "best") +
                                 " value; choose another missing-value policy");
        }
        xs.push_back(*sub);
        break;
      }
    }
  }
  if (xs.empty()) return MetricValue::nan(NanReason::empty_set);
  if (op == AggregateOperator::mean) {
    double s = 0.0;
    for (double x : xs) s += x;
    return MetricValue::of(s / static_cast<double>(xs.size()));
  }
  std::sort(xs.begin(), xs.end());
  return MetricValue::of(xs[(xs.size() - 1) / 2]);
}

AggregateNode aggregate(std::span<const MetricRecord> records, AggregateOperator op,
                        std::span<const std::string> grouping, MissingPolicy policy) {
  const std::string metric_id = single_metric(records);
  const auto sorted = canonical(records);
  AggregateNode root = build(pointers(sorted), 0, grouping, op, policy, metric_id);
  root.label = "all";
  return root;
}

std::map<std::string, AggregateNode> aggregate_by_metric(std::span<const MetricRecord> records,
                                                         AggregateOperator op,
                                                         std::span<const std::string> grouping,
                                                         MissingPolicy policy) {
  std::map<std::string, std::vector<MetricRecord>> by_metric;
  for (const auto& r : records) by_metric[r.metric_id].push_back(r);
  std::map<std::string, AggregateNode> out;
  for (const auto& [id, recs] : by_metric) out.emplace(id, aggregate(recs, op, grouping, policy));
  return out;
}

PerClassSummary per_class_summary(std::span<const MetricRecord> records, AggregateOperator op,
                                  MissingPolicy policy,
                                  std::optional<std::vector<int>> expected_classes) {
  const std::string metric_id = single_metric(records);
  const auto sorted = canonical(records);
  std::map<int, std::vector<const MetricRecord*>> by_class;
  for (const auto& r : sorted) {
    if (!r.class_id) throw AggregationError("record " + describe(r) + " has no class id");
    by_class[*r.class_id].push_back(&r);
  }
  PerClassSummary out;
  std::vector<MetricValue> class_values;
  for (const auto& [k, recs] : by_class) {
    int64_t missing = 0;
    GroupValue g{std::to_string(k), reduce_records(recs, op, policy, metric_id, &missing),
                 static_cast<int64_t>(recs.size())};
    class_values.push_back(g.value);
    out.per_class.push_back(std::move(g));
  }
  if (expected_classes) {
    for (int k : *expected_classes) {
      if (!by_class.contains(k)) out.absent_classes.push_back(k);
    }
    std::sort(out.absent_classes.begin(), out.absent_classes.end());
  }
  out.macro = reduce_values(class_values, AggregateOperator::mean, MissingPolicy::ignore, metric_id);
  int64_t missing = 0;
  out.pooled = reduce_records(pointers(sorted), op, policy, metric_id, &missing);
  return out;
}

StratifiedSummary stratify(std::span<const MetricRecord> records, const std::string& key,
                           AggregateOperator op, MissingPolicy policy) {
  const std::string metric_id = single_metric(records);
  const auto sorted = canonical(records);
  std::string offenders;
  for (const auto& r : sorted) {
    if (!r.metadata.contains(key)) {
      if (!offenders.empty()) offenders += ", ";
      offenders += describe(r);
    }
  }
  if (!offenders.empty()) {
    throw AggregationError("records without stratification key '" + key + "': " + offenders);
  }
  std::map<std::string, std::vector<const MetricRecord*>> strata;
  for (const auto& r : sorted) strata[r.metadata.at(key)].push_back(&r);

  StratifiedSummary out;
  out.key = key;
  std::optional<double> lo, hi;
  for (const auto& [label, recs] : strata) {
    int64_t missing = 0;
    GroupValue g{label, reduce_records(recs, op, policy, metric_id, &missing),
                 static_cast<int64_t>(recs.size())};
    if (g.value) {
      lo = lo ? std::min(*lo, g.value.value) : g.value.value;
      hi = hi ? std::max(*hi, g.value.value) : g.value.value;
    }
    out.strata.push_back(std::move(g));
  }
  int64_t missing = 0;
  out.overall = reduce_records(pointers(sorted), op, policy, metric_id, &missing);
  out.max_gap = lo ? MetricValue::of(*hi - *lo) : MetricValue::nan(NanReason::empty_set);
  return out;
}

ConditionalSummary conditional_on_presence(std::span<const MetricRecord> records,
                                           int target_class, int conditioning_class,
                                           const std::map<std::string, std::set<int>>& presence,
                                           AggregateOperator op, MissingPolicy policy) {
  const auto sorted = canonical(records);
  std::vector<const MetricRecord*> all, with, without;
  std::string offenders;
  for (const auto& r : sorted) {
    if (!r.class_id || *r.class_id != target_class) continue;
    const auto it = presence.find(r.item_id);
    if (it == presence.end()) {
      if (!offenders.empty()) offenders += ", ";
      offenders += r.item_id;
      continue;
    }
    all.push_back(&r);
    (it->second.contains(conditioning_class) ? with : without).push_back(&r);
  }
  if (!offenders.empty()) {
    throw AggregationError("presence map does not cover items: " + offenders);
  }
  const std::string metric_id = all.empty() ? std::string() : all.front()->metric_id;
  for (const auto* r : all) {
    if (r->metric_id != metric_id) throw ParameterError("records mix metrics");
  }
  ConditionalSummary out;
  int64_t missing = 0;
  out.unconditional = reduce_records(all, op, policy, metric_id, &missing);
  out.present = reduce_records(with, op, policy, metric_id, &missing);
  out.absent = reduce_records(without, op, policy, metric_id, &missing);
  return out;
}

std::vector<RankEntry> rank(const std::map<std::string, std::vector<MetricRecord>>& per_algorithm,
                            const RankScheme& scheme, MissingPolicy policy) {
  if (per_algorithm.size() < 2) throw ParameterError("ranking needs at least two algorithms");
  using ItemKey = std::pair<std::string, std::optional<int>>;
  std::string metric_id;
  std::map<std::string, std::map<ItemKey, MetricValue>> table;
  for (const auto& [algo, recs] : per_algorithm) {
    auto& row = table[algo];
    for (const auto& r : recs) {
      if (metric_id.empty()) metric_id = r.metric_id;
      if (r.metric_id != metric_id) throw ParameterError("ranking records mix metrics");
      if (!row.emplace(ItemKey{r.item_id, r.class_id}, r.value).second) {
        throw ParameterError("algorithm '" + algo + "' has duplicate records for " + describe(r));
      }
    }
  }
  const auto& first = table.begin()->second;
  for (const auto& [algo, row] : table) {
    bool same = row.size() == first.size();
    for (auto a = row.begin(), b = first.begin(); same && a != row.end(); ++a, ++b) {
      same = a->first == b->first;
    }
    if (!same) {
      throw AggregationError("algorithm '" + algo + "' was evaluated on a different item set");
    }
  }
  const auto& info = metric_info(metric_id);

  // Competition ranking ("1224"); `better(a, b)` orders candidates.
  auto assign_ranks = [](const std::vector<std::pair<std::string, double>>& scored,
                         const auto& better) {
    std::vector<RankEntry> out;
    for (const auto& [name, s] : scored) {
      int r = 1;
      for (const auto& [other, t] : scored) r += better(t, s) ? 1 : 0;
      out.push_back({name, s, r});
    }
    std::sort(out.begin(), out.end(), [](const RankEntry& a, const RankEntry& b) {
      return std::tie(a.rank, a.algorithm) < std::tie(b.rank, b.algorithm);
    });
    return out;
  };

  if (scheme.order == RankOrder::aggregate_then_rank) {
    std::vector<std::pair<std::string, double>> scored;
    for (const auto& [algo, row] : table) {
      std::vector<MetricValue> values;
      for (const auto& [k, v] : row) values.push_back(v);
      const auto agg = reduce_values(values, scheme.op, policy, metric_id, algo);
      if (!agg) throw AggregationError("algorithm '" + algo + "' has no defined values");
      scored.emplace_back(algo, agg.value);
    }
    return assign_ranks(scored, [&](double a, double b) { return info.better(a, b); });
  }

  // rank_then_aggregate: rank per item, missing values rank last unless the
  // policy substitutes a value.
  std::map<std::string, std::vector<MetricValue>> ranks_per_algo;
  for (const auto& [key, unused] : first) {
    std::vector<std::pair<std::string, double>> scored;
    std::vector<std::string> missing;
    for (const auto& [algo, row] : table) {
      const MetricValue v = row.at(key);
      if (v) {
        scored.emplace_back(algo, v.value);
        continue;
      }
      if (policy == MissingPolicy::error) {
        throw AggregationError("missing value for algorithm '" + algo + "' on item '" +
                               key.first + "'");
      }
      const auto sub = policy == MissingPolicy::best_value    ? info.best()
                       : policy == MissingPolicy::worst_value ? info.worst()
                                                              : std::nullopt;
      if (sub) {
        scored.emplace_back(algo, *sub);
      } else {
        missing.push_back(algo);
      }
    }
    auto ranked = assign_ranks(scored, [&](double a, double b) { return info.better(a, b); });
    for (const auto& e : ranked) ranks_per_algo[e.algorithm].push_back(MetricValue::of(e.rank));
    for (const auto& algo : missing) {
      ranks_per_algo[algo].push_back(MetricValue::of(static_cast<double>(scored.size() + 1)));
    }
  }
  std::vector<std::pair<std::string, double>> scored;
  for (const auto& [algo, ranks] : ranks_per_algo) {
    std::vector<double> xs;
    for (const auto& r : ranks) xs.push_back(r.value);
    double agg = 0.0;
    if (scheme.op == AggregateOperator::mean) {
      for (double x : xs) agg += x;
      agg /= static_cast<double>(xs.size());
    } else {
      std::sort(xs.begin(), xs.end());
      agg = xs[(xs.size() - 1) / 2];
    }
    scored.emplace_back(algo, agg);
  }
  return assign_ranks(scored, [](double a, double b) { return a < b; });
}

}  // namespace valmet
