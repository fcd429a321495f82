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

#include "valmet/config.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

namespace valmet {

namespace fs = std::filesystem;
using nlohmann::json;

bool EvaluationConfig::has_metric(std::string_view id) const { return metric(id) != nullptr; }

const MetricSpec* EvaluationConfig::metric(std::string_view id) const {
  for (const auto& m : metrics) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

MetricSelection EvaluationConfig::selection() const {
  MetricSelection s;
  for (const auto& m : metrics) s.metrics.push_back(m.id);
  s.fppi_range_explicit = fppi_range.has_value();
  s.binning_explicit = binning.has_value();
  s.missing_policy_explicit = missing_policy.has_value();
  s.grouping = grouping;
  s.per_class_report = per_class;
  s.stratify_by = stratify_by;
  s.ranking = ranking;
  s.rank_normalized = rank_normalized;
  s.threshold_policy = threshold_policy;
  return s;
}

void EvaluationConfig::validate_for_run() const {
  std::vector<std::string> bad;
  for (const auto& m : metrics) {
    const auto& info = metric_info(m.id);
    if (!info.valid_for(task) || (task == Task::InS && info.requires_scores)) bad.push_back(m.id);
  }
  if (!bad.empty()) {
    std::string ids;
    for (const auto& b : bad) ids += (ids.empty() ? "" : ", ") + b;
    throw ParameterError("metrics not computable for task " + std::string(to_string(task)) + ": " + ids);
  }
  if (threshold_policy == ThresholdPolicy::per_class && num_classes &&
      class_thresholds.size() != static_cast<size_t>(*num_classes)) {
    throw ParameterError("per_class threshold policy needs one threshold per class");
  }
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ParameterError("config: " + msg); }

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      bad("unknown key '" + k + "' in " + where);
    }
  }
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  return j.get<double>();
}

bool boolean(const json& j, const std::string& what) {
  if (!j.is_boolean()) bad(what + " must be true or false");
  return j.get<bool>();
}

std::string string(const json& j, const std::string& what) {
  if (!j.is_string()) bad(what + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> strings(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be a list of strings");
  std::vector<std::string> out;
  for (const auto& v : j) out.push_back(string(v, what));
  return out;
}

std::vector<double> numbers(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be a list of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

template <typename Fn>
auto wrap(Fn fn) {
  try {
    return fn();
  } catch (const ParameterError& e) {
    bad(e.what());
  }
}

PartialAucNormalization normalization_from_string(const std::string& s) {
  if (s == "none") return PartialAucNormalization::none;
  if (s == "width") return PartialAucNormalization::width;
  if (s == "standardized") return PartialAucNormalization::standardized;
  bad("unknown partial AUROC normalization '" + s + "'");
}

std::string_view normalization_name(PartialAucNormalization n) {
  switch (n) {
    case PartialAucNormalization::none: return "none";
    case PartialAucNormalization::width: return "width";
    case PartialAucNormalization::standardized: return "standardized";
  }
  return "width";
}

MetricSpec parse_metric(const json& j) {
  MetricSpec m;
  if (j.is_string()) {
    m.id = j.get<std::string>();
  } else {
    check_keys(j, "metric", {"id", "beta", "tau", "d", "percentile", "threshold_probability",
                             "weights", "costs", "priors", "range", "normalization", "ties"});
    if (!j.contains("id")) bad("metric entry without 'id'");
    m.id = string(j["id"], "metric id");
    if (j.contains("beta")) m.beta = number(j["beta"], "beta");
    if (j.contains("tau")) m.tau = number(j["tau"], "tau");
    if (j.contains("d")) m.d = number(j["d"], "d");
    if (j.contains("percentile")) m.percentile = number(j["percentile"], "percentile");
    if (j.contains("threshold_probability")) {
      m.threshold_probability = number(j["threshold_probability"], "threshold_probability");
    }
    if (j.contains("weights")) m.weights = string(j["weights"], "weights");
    if (j.contains("costs")) m.costs = numbers(j["costs"], "costs");
    if (j.contains("priors")) m.priors = numbers(j["priors"], "priors");
    if (j.contains("range")) {
      const auto r = numbers(j["range"], "range");
      if (r.size() != 2) bad("range needs two numbers");
      m.lo = r[0];
      m.hi = r[1];
    }
    if (j.contains("normalization")) {
      m.normalization = normalization_from_string(string(j["normalization"], "normalization"));
    }
    if (j.contains("ties")) {
      m.ties = wrap([&] { return tie_strategy_from_string(string(j["ties"], "ties")); });
    }
  }
  if (!is_registered(m.id)) bad("unknown metric id '" + m.id + "'");
  if (!(m.beta > 0.0)) bad("beta must be positive");
  if (!(m.tau >= 0.0)) bad("tau must be non-negative");
  if (!(m.d > 0.0)) bad("d must be positive");
  if (!(m.percentile > 0.0 && m.percentile <= 100.0)) bad("percentile must lie in (0, 100]");
  if (!(m.threshold_probability > 0.0 && m.threshold_probability < 1.0)) {
    bad("threshold_probability must lie in (0, 1)");
  }
  if (m.weights != "linear" && m.weights != "quadratic") bad("weights must be linear or quadratic");
  if (!(m.lo >= 0.0 && m.lo < m.hi && m.hi <= 1.0)) bad("range must satisfy 0 <= lo < hi <= 1");
  return m;
}

json metric_to_json(const MetricSpec& m) {
  json j;
  j["id"] = m.id;
  if (m.id == "f_beta") j["beta"] = m.beta;
  if (m.id == "nsd") j["tau"] = m.tau;
  if (m.id == "boundary_iou") j["d"] = m.d;
  if (m.id == "hd95") j["percentile"] = m.percentile;
  if (m.id == "net_benefit") j["threshold_probability"] = m.threshold_probability;
  if (m.id == "weighted_kappa") j["weights"] = m.weights;
  if (m.id == "expected_cost") {
    j["costs"] = m.costs;
    j["priors"] = m.priors;
  }
  if (m.id == "partial_auroc") {
    j["range"] = {m.lo, m.hi};
    j["normalization"] = normalization_name(m.normalization);
  }
  if (m.id == "ap") j["ties"] = to_string(m.ties);
  return j;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

EvaluationConfig parse_config(std::string_view text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("config: byte " + std::to_string(e.byte) + ": invalid JSON");
  }
  check_keys(j, "config", {"task", "seed", "num_classes", "positive_class", "inputs", "metrics",
                           "threshold", "localization", "assignment", "panoptic", "froc",
                           "calibration", "aggregation", "ranking", "dataset", "linter"});
  EvaluationConfig c;
  if (!j.contains("task")) bad("missing 'task'");
  c.task = wrap([&] { return task_from_string(string(j["task"], "task")); });
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("seed must be a non-negative integer");
    c.seed = j["seed"].get<uint64_t>();
  }
  if (j.contains("num_classes")) {
    if (!j["num_classes"].is_number_integer() || j["num_classes"].get<int>() < 2) {
      bad("num_classes must be an integer >= 2");
    }
    c.num_classes = j["num_classes"].get<int>();
  }
  if (j.contains("positive_class")) {
    if (!j["positive_class"].is_number_integer()) bad("positive_class must be an integer");
    c.positive_class = j["positive_class"].get<int>();
  }
  if (j.contains("inputs")) {
    const auto& in = j["inputs"];
    check_keys(in, "inputs", {"classification", "manifest", "references", "predictions", "images"});
    auto get = [&](const char* key) {
      return in.contains(key) ? string(in[key], std::string("inputs.") + key) : std::string();
    };
    c.inputs_raw = {get("classification"), get("manifest"), get("references"), get("predictions"),
                    get("images")};
    c.inputs = {resolve(base_dir, get("classification")), resolve(base_dir, get("manifest")),
                resolve(base_dir, get("references")), resolve(base_dir, get("predictions")),
                resolve(base_dir, get("images"))};
  }
  if (!j.contains("metrics") || !j["metrics"].is_array() || j["metrics"].empty()) {
    bad("'metrics' must be a non-empty list");
  }
  std::set<std::string> seen;
  for (const auto& m : j["metrics"]) {
    c.metrics.push_back(parse_metric(m));
    if (!seen.insert(c.metrics.back().id).second) bad("metric '" + c.metrics.back().id + "' listed twice");
  }
  if (j.contains("threshold")) {
    const auto& t = j["threshold"];
    check_keys(t, "threshold", {"policy", "value", "per_class"});
    if (t.contains("policy")) {
      c.threshold_policy = wrap([&] { return threshold_policy_from_string(string(t["policy"], "policy")); });
    }
    if (t.contains("value")) c.threshold = number(t["value"], "threshold.value");
    if (t.contains("per_class")) c.class_thresholds = numbers(t["per_class"], "threshold.per_class");
    if (!(c.threshold >= 0.0 && c.threshold <= 1.0)) bad("threshold.value must lie in [0,1]");
    for (double v : c.class_thresholds) {
      if (!(v >= 0.0 && v <= 1.0)) bad("per-class thresholds must lie in [0,1]");
    }
    if (c.threshold_policy == ThresholdPolicy::per_class && c.class_thresholds.empty()) {
      bad("per_class threshold policy needs threshold.per_class");
    }
  }
  if (j.contains("localization")) {
    const auto& l = j["localization"];
    check_keys(l, "localization", {"criterion", "cutoff", "boundary_d"});
    if (l.contains("criterion")) {
      c.localization.kind = wrap([&] { return criterion_kind_from_string(string(l["criterion"], "criterion")); });
    }
    if (l.contains("cutoff")) c.localization.cutoff = number(l["cutoff"], "cutoff");
    if (l.contains("boundary_d")) c.localization.boundary_d = number(l["boundary_d"], "boundary_d");
    wrap([&] {
      c.localization.validate();
      return 0;
    });
  }
  if (j.contains("assignment")) {
    c.assignment = wrap([&] { return assignment_strategy_from_string(string(j["assignment"], "assignment")); });
  }
  if (j.contains("panoptic")) {
    const auto p = string(j["panoptic"], "panoptic");
    if (p != "strict" && p != "loose") bad("panoptic must be strict or loose");
    c.panoptic = p == "strict" ? PanopticMode::strict : PanopticMode::loose;
  }
  if (j.contains("froc")) {
    const auto& f = j["froc"];
    check_keys(f, "froc", {"fppi_range", "normalize", "sensitivity"});
    if (f.contains("fppi_range")) {
      const auto r = numbers(f["fppi_range"], "fppi_range");
      if (r.size() != 2) bad("fppi_range needs two numbers");
      c.fppi_range = FppiRange{r[0], r[1]};
      wrap([&] {
        c.fppi_range->validate();
        return 0;
      });
    }
    if (f.contains("normalize")) c.froc_normalize = boolean(f["normalize"], "froc.normalize");
    if (f.contains("sensitivity")) {
      c.sensitivity_mode = wrap([&] { return sensitivity_mode_from_string(string(f["sensitivity"], "sensitivity")); });
    }
  }
  if (j.contains("calibration")) {
    const auto& cal = j["calibration"];
    check_keys(cal, "calibration", {"binning"});
    if (cal.contains("binning")) {
      const auto& b = cal["binning"];
      check_keys(b, "calibration.binning", {"kind", "n_bins", "edges"});
      BinningScheme s;
      if (b.contains("kind")) s.kind = wrap([&] { return binning_kind_from_string(string(b["kind"], "kind")); });
      if (b.contains("n_bins")) {
        if (!b["n_bins"].is_number_integer()) bad("n_bins must be an integer");
        s.n_bins = b["n_bins"].get<int>();
      }
      if (b.contains("edges")) s.edges = numbers(b["edges"], "edges");
      wrap([&] {
        s.validate();
        return 0;
      });
      c.binning = s;
    }
  }
  if (j.contains("aggregation")) {
    const auto& a = j["aggregation"];
    check_keys(a, "aggregation", {"operator", "grouping", "missing_policy", "per_class", "stratify_by"});
    if (a.contains("operator")) {
      c.op = wrap([&] { return aggregate_operator_from_string(string(a["operator"], "operator")); });
    }
    if (a.contains("grouping")) c.grouping = strings(a["grouping"], "grouping");
    if (a.contains("missing_policy")) {
      c.missing_policy = wrap([&] { return missing_policy_from_string(string(a["missing_policy"], "missing_policy")); });
    }
    if (a.contains("per_class")) c.per_class = boolean(a["per_class"], "per_class");
    if (a.contains("stratify_by")) c.stratify_by = strings(a["stratify_by"], "stratify_by");
  }
  if (j.contains("ranking")) {
    const auto& r = j["ranking"];
    check_keys(r, "ranking", {"enabled", "normalized"});
    if (r.contains("enabled")) c.ranking = boolean(r["enabled"], "ranking.enabled");
    if (r.contains("normalized")) c.rank_normalized = boolean(r["normalized"], "ranking.normalized");
  }
  if (j.contains("dataset")) {
    const auto& d = j["dataset"];
    check_keys(d, "dataset", {"hierarchy_keys", "strata_keys", "class_hierarchy"});
    if (d.contains("hierarchy_keys")) c.declarations.hierarchy_keys = strings(d["hierarchy_keys"], "hierarchy_keys");
    if (d.contains("strata_keys")) c.declarations.strata_keys = strings(d["strata_keys"], "strata_keys");
    if (d.contains("class_hierarchy")) c.declarations.class_hierarchy = boolean(d["class_hierarchy"], "class_hierarchy");
  }
  if (j.contains("linter")) {
    const auto& l = j["linter"];
    check_keys(l, "linter", {"imbalance_ratio", "small_test_set", "small_structure_px", "size_cv", "warn_only"});
    if (l.contains("imbalance_ratio")) c.linter.imbalance_ratio = number(l["imbalance_ratio"], "imbalance_ratio");
    if (l.contains("small_test_set")) {
      if (!l["small_test_set"].is_number_integer()) bad("small_test_set must be an integer");
      c.linter.small_test_set = l["small_test_set"].get<int64_t>();
    }
    if (l.contains("small_structure_px")) c.linter.small_structure_px = number(l["small_structure_px"], "small_structure_px");
    if (l.contains("size_cv")) c.linter.size_cv = number(l["size_cv"], "size_cv");
    if (l.contains("warn_only")) c.linter.warn_only = boolean(l["warn_only"], "warn_only");
  }
  return c;
}

EvaluationConfig load_config(const fs::path& path) {
  return parse_config(read_file(path), path.parent_path());
}

std::string config_to_json(const EvaluationConfig& c) {
  json j;
  j["task"] = to_string(c.task);
  if (c.seed) j["seed"] = *c.seed;
  if (c.num_classes) j["num_classes"] = *c.num_classes;
  j["positive_class"] = c.positive_class;
  json in = json::object();
  auto put = [&](const char* key, const fs::path& p) {
    if (!p.empty()) in[key] = p.generic_string();
  };
  put("classification", c.inputs_raw.classification);
  put("manifest", c.inputs_raw.manifest);
  put("references", c.inputs_raw.references);
  put("predictions", c.inputs_raw.predictions);
  put("images", c.inputs_raw.images);
  j["inputs"] = in;
  j["metrics"] = json::array();
  for (const auto& m : c.metrics) j["metrics"].push_back(metric_to_json(m));
  j["threshold"] = {{"policy", to_string(c.threshold_policy)}, {"value", c.threshold}};
  if (!c.class_thresholds.empty()) j["threshold"]["per_class"] = c.class_thresholds;
  j["localization"] = {{"criterion", to_string(c.localization.kind)},
                       {"cutoff", c.localization.cutoff},
                       {"boundary_d", c.localization.boundary_d}};
  j["assignment"] = to_string(c.assignment);
  j["panoptic"] = to_string(c.panoptic);
  j["froc"] = {{"normalize", c.froc_normalize}, {"sensitivity", to_string(c.sensitivity_mode)}};
  if (c.fppi_range) j["froc"]["fppi_range"] = {c.fppi_range->lo, c.fppi_range->hi};
  j["calibration"] = json::object();
  if (c.binning) {
    json b{{"kind", to_string(c.binning->kind)}};
    if (c.binning->kind == BinningKind::custom) {
      b["edges"] = c.binning->edges;
    } else {
      b["n_bins"] = c.binning->n_bins;
    }
    j["calibration"]["binning"] = b;
  }
  j["aggregation"] = {{"operator", to_string(c.op)},
                      {"grouping", c.grouping},
                      {"per_class", c.per_class},
                      {"stratify_by", c.stratify_by}};
  if (c.missing_policy) j["aggregation"]["missing_policy"] = to_string(*c.missing_policy);
  j["ranking"] = {{"enabled", c.ranking}, {"normalized", c.rank_normalized}};
  j["dataset"] = {{"hierarchy_keys", c.declarations.hierarchy_keys},
                  {"strata_keys", c.declarations.strata_keys},
                  {"class_hierarchy", c.declarations.class_hierarchy}};
  j["linter"] = {{"imbalance_ratio", c.linter.imbalance_ratio},
                 {"small_test_set", c.linter.small_test_set},
                 {"small_structure_px", c.linter.small_structure_px},
                 {"size_cv", c.linter.size_cv},
                 {"warn_only", c.linter.warn_only}};
  return j.dump(2);
}

}  // namespace valmet
