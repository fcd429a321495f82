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

#include "valmet/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include <nlohmann/json.hpp>

#include "valmet/io.hpp"

namespace valmet {

using nlohmann::json;

void sort_records(std::vector<MetricRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const MetricRecord& a, const MetricRecord& b) {
    return std::tie(a.item_id, a.class_id, a.metric_id) < std::tie(b.item_id, b.class_id, b.metric_id);
  });
}

namespace {

json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_num(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ParseError("report: bad number '" + s + "'");
  }
  return j.get<double>();
}

void put_value(json& j, const MetricValue& v) {
  if (v.defined()) {
    j["value"] = num(v.value);
  } else {
    j["value"] = nullptr;
    j["nan_reason"] = to_string(*v.nan_reason);
  }
}

json value_json(const MetricValue& v) {
  json j = json::object();
  put_value(j, v);
  return j;
}

MetricValue get_value(const json& j) {
  if (j.contains("nan_reason")) return MetricValue::nan(nan_reason_from_string(j["nan_reason"].get<std::string>()));
  return MetricValue::of(get_num(j["value"]));
}

json meta_json(const std::map<std::string, std::string>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

json record_json(const MetricRecord& r) {
  json j{{"item_id", r.item_id}, {"metric_id", r.metric_id}};
  j["class_id"] = r.class_id ? json(*r.class_id) : json(nullptr);
  put_value(j, r.value);
  j["metadata"] = meta_json(r.metadata);
  return j;
}

MetricRecord record_from(const json& j) {
  MetricRecord r;
  r.item_id = j.at("item_id").get<std::string>();
  r.metric_id = j.at("metric_id").get<std::string>();
  if (j.contains("class_id") && !j["class_id"].is_null()) r.class_id = j["class_id"].get<int>();
  r.value = get_value(j);
  if (j.contains("metadata")) {
    for (const auto& [k, v] : j["metadata"].items()) r.metadata[k] = v.get<std::string>();
  }
  return r;
}

json node_json(const AggregateNode& n) {
  json j{{"key", n.key}, {"label", n.label}, {"n_records", n.n_records}, {"n_missing", n.n_missing}};
  put_value(j, n.value);
  j["children"] = json::array();
  for (const auto& c : n.children) j["children"].push_back(node_json(c));
  return j;
}

AggregateNode node_from(const json& j) {
  AggregateNode n;
  n.key = j.at("key").get<std::string>();
  n.label = j.at("label").get<std::string>();
  n.n_records = j.at("n_records").get<int64_t>();
  n.n_missing = j.at("n_missing").get<int64_t>();
  n.value = get_value(j);
  for (const auto& c : j.at("children")) n.children.push_back(node_from(c));
  return n;
}

json groups_json(const std::vector<GroupValue>& groups) {
  json a = json::array();
  for (const auto& g : groups) {
    json j{{"label", g.label}, {"n_records", g.n_records}};
    put_value(j, g.value);
    a.push_back(j);
  }
  return a;
}

std::vector<GroupValue> groups_from(const json& a) {
  std::vector<GroupValue> out;
  for (const auto& j : a) {
    out.push_back({j.at("label").get<std::string>(), get_value(j), j.at("n_records").get<int64_t>()});
  }
  return out;
}

json per_class_json(const PerClassSummary& s) {
  return {{"per_class", groups_json(s.per_class)},
          {"macro", value_json(s.macro)},
          {"pooled", value_json(s.pooled)},
          {"absent_classes", s.absent_classes}};
}

PerClassSummary per_class_from(const json& j) {
  PerClassSummary s;
  s.per_class = groups_from(j.at("per_class"));
  s.macro = get_value(j.at("macro"));
  s.pooled = get_value(j.at("pooled"));
  s.absent_classes = j.at("absent_classes").get<std::vector<int>>();
  return s;
}

json strat_json(const StratifiedSummary& s) {
  return {{"key", s.key},
          {"strata", groups_json(s.strata)},
          {"overall", value_json(s.overall)},
          {"max_gap", value_json(s.max_gap)}};
}

StratifiedSummary strat_from(const json& j) {
  StratifiedSummary s;
  s.key = j.at("key").get<std::string>();
  s.strata = groups_from(j.at("strata"));
  s.overall = get_value(j.at("overall"));
  s.max_gap = get_value(j.at("max_gap"));
  return s;
}

json curve_json(const CurveRecord& c) {
  json j{{"name", c.name},
         {"x_axis", to_string(c.curve.x_axis)},
         {"y_axis", to_string(c.curve.y_axis)},
         {"area_metric", c.area_metric}};
  j["class_id"] = c.class_id ? json(*c.class_id) : json(nullptr);
  j["points"] = json::array();
  for (const auto& p : c.curve.points) j["points"].push_back({num(p.x), num(p.y)});
  j["thresholds"] = json::array();
  for (double t : c.curve.thresholds) j["thresholds"].push_back(num(t));
  j["area"] = value_json(c.area);
  return j;
}

CurveRecord curve_from(const json& j) {
  CurveRecord c;
  c.name = j.at("name").get<std::string>();
  if (!j.at("class_id").is_null()) c.class_id = j["class_id"].get<int>();
  c.curve.x_axis = axis_from_string(j.at("x_axis").get<std::string>());
  c.curve.y_axis = axis_from_string(j.at("y_axis").get<std::string>());
  for (const auto& p : j.at("points")) c.curve.points.push_back({get_num(p.at(0)), get_num(p.at(1))});
  for (const auto& t : j.at("thresholds")) c.curve.thresholds.push_back(get_num(t));
  c.area_metric = j.at("area_metric").get<std::string>();
  c.area = get_value(j.at("area"));
  return c;
}

json warning_json(const PitfallWarning& w) {
  return {{"code", w.code},         {"rule", w.rule},         {"severity", to_string(w.severity)},
          {"message", w.message},   {"anchor", w.anchor},     {"features", meta_json(w.features)}};
}

PitfallWarning warning_from(const json& j) {
  PitfallWarning w;
  w.code = j.at("code").get<std::string>();
  w.rule = j.at("rule").get<std::string>();
  w.severity = severity_from_string(j.at("severity").get<std::string>());
  w.message = j.at("message").get<std::string>();
  w.anchor = j.at("anchor").get<std::string>();
  for (const auto& [k, v] : j.at("features").items()) w.features[k] = v.get<std::string>();
  return w;
}

json aggregation_json(const AggregationSection& s) {
  json j{{"aggregates", json::object()},
         {"per_class", json::object()},
         {"stratified", json::object()},
         {"rankings", json::object()}};
  for (const auto& [m, n] : s.aggregates) j["aggregates"][m] = node_json(n);
  for (const auto& [m, p] : s.per_class) j["per_class"][m] = per_class_json(p);
  for (const auto& [m, list] : s.stratified) {
    j["stratified"][m] = json::array();
    for (const auto& st : list) j["stratified"][m].push_back(strat_json(st));
  }
  for (const auto& [m, list] : s.rankings) {
    j["rankings"][m] = json::array();
    for (const auto& e : list) {
      j["rankings"][m].push_back({{"algorithm", e.algorithm}, {"score", num(e.score)}, {"rank", e.rank}});
    }
  }
  return j;
}

AggregationSection aggregation_from(const json& j) {
  AggregationSection s;
  for (const auto& [m, n] : j.at("aggregates").items()) s.aggregates[m] = node_from(n);
  for (const auto& [m, p] : j.at("per_class").items()) s.per_class[m] = per_class_from(p);
  for (const auto& [m, list] : j.at("stratified").items()) {
    for (const auto& st : list) s.stratified[m].push_back(strat_from(st));
  }
  for (const auto& [m, list] : j.at("rankings").items()) {
    for (const auto& e : list) {
      s.rankings[m].push_back(
          {e.at("algorithm").get<std::string>(), get_num(e.at("score")), e.at("rank").get<int>()});
    }
  }
  return s;
}

}  // namespace

std::string report_to_json(const Report& r) {
  json j;
  j["engine"] = {{"name", kEngineName}, {"version", r.engine_version}};
  j["config"] = r.config_json.empty() ? json::object() : json::parse(r.config_json);
  j["warnings"] = json::array();
  for (const auto& w : r.warnings) j["warnings"].push_back(warning_json(w));
  j["records"] = json::array();
  for (const auto& rec : r.records) j["records"].push_back(record_json(rec));
  j["aggregation"] = aggregation_json(r.aggregation);
  j["curves"] = json::array();
  for (const auto& c : r.curves) j["curves"].push_back(curve_json(c));
  return j.dump(2) + "\n";
}

Report report_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    Report r;
    r.engine_version = j.at("engine").at("version").get<std::string>();
    r.config_json = j.at("config").dump(2);
    for (const auto& w : j.at("warnings")) r.warnings.push_back(warning_from(w));
    for (const auto& rec : j.at("records")) r.records.push_back(record_from(rec));
    r.aggregation = aggregation_from(j.at("aggregation"));
    for (const auto& c : j.at("curves")) r.curves.push_back(curve_from(c));
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

std::string curves_to_json(const std::vector<CurveRecord>& curves) {
  json j = {{"engine", {{"name", kEngineName}, {"version", kEngineVersion}}}, {"curves", json::array()}};
  for (const auto& c : curves) j["curves"].push_back(curve_json(c));
  return j.dump(2) + "\n";
}

std::string records_to_jsonl(const std::vector<MetricRecord>& records) {
  std::string out;
  for (const auto& r : records) out += record_json(r).dump() + "\n";
  return out;
}

std::vector<MetricRecord> records_from_jsonl(std::string_view text, std::string_view source) {
  std::vector<MetricRecord> out;
  size_t line = 0, start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    const auto s = text.substr(start, end - start);
    start = end + 1;
    if (s.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line) + ": ";
    try {
      auto r = record_from(json::parse(s));
      r.validate();
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(where + e.what());
    } catch (const ParameterError& e) {
      throw ParseError(where + e.what());
    }
  }
  return out;
}

std::string aggregation_to_json(const AggregationSection& section) {
  return aggregation_json(section).dump(2) + "\n";
}

}  // namespace valmet
