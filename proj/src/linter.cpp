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

#include "valmet/linter.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "valmet/metric_value.hpp"

namespace valmet {

double DatasetFingerprint::prevalence_ratio() const {
  if (class_prevalences.size() < 2) return 1.0;
  double lo = 1.0, hi = 0.0;
  for (const auto& [k, p] : class_prevalences) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  return hi / lo;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

SizeStats size_stats(std::vector<int64_t> sizes) {
  SizeStats s;
  s.n_structures = static_cast<int64_t>(sizes.size());
  if (sizes.empty()) return s;
  std::sort(sizes.begin(), sizes.end());
  s.min = static_cast<double>(sizes.front());
  s.median = static_cast<double>(sizes[(sizes.size() - 1) / 2]);
  double mean = 0.0;
  for (int64_t v : sizes) mean += static_cast<double>(v);
  mean /= static_cast<double>(sizes.size());
  double var = 0.0;
  for (int64_t v : sizes) var += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
  var /= static_cast<double>(sizes.size());
  s.cv = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
  return s;
}

void normalize(std::map<int, double>& counts) {
  double total = 0.0;
  for (const auto& [k, c] : counts) total += c;
  for (auto it = counts.begin(); it != counts.end();) {
    if (it->second == 0.0) {
      it = counts.erase(it);
    } else {
      it->second /= total;
      ++it;
    }
  }
}

}  // namespace

DatasetFingerprint fingerprint(const Dataset& ds, const DatasetDeclarations& decl) {
  DatasetFingerprint fp;
  fp.task = ds.task;
  fp.n_items = static_cast<int64_t>(ds.size());
  fp.num_classes = ds.num_classes;
  fp.class_hierarchy = decl.class_hierarchy;
  std::map<int, double> counts;
  switch (ds.task) {
    case Task::ImLC: {
      fp.has_scores = std::all_of(ds.classification.begin(), ds.classification.end(),
                                  [](const ClassificationItem& it) { return !it.scores.empty(); });
      for (const auto& it : ds.classification) counts[it.ref_class] += 1.0;
      break;
    }
    case Task::SemS:
    case Task::InS: {
      std::map<int, std::vector<int64_t>> sizes;
      for (const auto& it : ds.segmentation) {
        const auto ref_labels = it.reference.labels();
        if (ref_labels.empty()) ++fp.empty_reference_count;
        if (it.prediction.labels().empty()) ++fp.empty_prediction_count;
        if (ds.task == Task::SemS) {
          for (size_t i = 0; i < it.reference.size(); ++i) counts[it.reference.data()[i]] += 1.0;
        } else {
          counts[1] += static_cast<double>(ref_labels.size());
        }
        for (int32_t k : ref_labels) {
          const auto c = component_sizes(it.reference, k);
          auto& dst = sizes[ds.task == Task::SemS ? k : 1];
          dst.insert(dst.end(), c.begin(), c.end());
        }
      }
      for (auto& [k, v] : sizes) fp.structure_sizes[k] = size_stats(std::move(v));
      break;
    }
    case Task::ObD: {
      fp.has_scores = true;
      for (const auto& im : ds.detection) {
        if (im.refs.empty()) ++fp.empty_reference_count;
        if (im.preds.empty()) ++fp.empty_prediction_count;
        for (const auto& r : im.refs) counts[r.class_id] += 1.0;
        for (const auto& p : im.preds) fp.has_scores = fp.has_scores && p.score.has_value();
      }
      break;
    }
  }
  normalize(counts);
  fp.class_prevalences = std::move(counts);

  auto present = [&](const std::vector<std::string>& keys) {
    std::set<std::string> out;
    for (const auto& k : keys) {
      for (size_t i = 0; i < ds.size(); ++i) {
        if (ds.meta(i).count(k)) {
          out.insert(k);
          break;
        }
      }
    }
    return std::vector<std::string>(out.begin(), out.end());
  };
  fp.hierarchy_keys = present(decl.hierarchy_keys);
  fp.strata_keys = present(decl.strata_keys);
  return fp;
}

std::string_view to_string(ThresholdPolicy p) {
  return p == ThresholdPolicy::global ? "global" : "per_class";
}

ThresholdPolicy threshold_policy_from_string(std::string_view name) {
  if (name == "global") return ThresholdPolicy::global;
  if (name == "per_class") return ThresholdPolicy::per_class;
  throw ParameterError("unknown threshold policy '" + std::string(name) + "'");
}

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::info: return "info";
    case Severity::warn: return "warn";
    case Severity::error: return "error";
  }
  return "warn";
}

Severity severity_from_string(std::string_view name) {
  for (auto s : {Severity::info, Severity::warn, Severity::error}) {
    if (to_string(s) == name) return s;
  }
  throw ParameterError("unknown severity '" + std::string(name) + "'");
}

const std::map<std::string, std::string>& anchor_table() {
  static const std::map<std::string, std::string> table = {
      {"problem-category", "metrics must match the problem category; pixel-level overlap is not an object-level score"},
      {"related-metrics", "DSC and IoU are monotone transforms of each other and add no information together"},
      {"global-threshold", "multi-class deployment uses one decision rule, not per-class tuned cut-offs"},
      {"small-structures", "overlap scores of tiny structures swing strongly with single-pixel errors"},
      {"size-variability", "overlap scores are not comparable across structures of very different size"},
      {"class-imbalance", "accuracy-type and ROC metrics hide poor predictive values under imbalance"},
      {"calibration-sample-size", "binned calibration errors are biased upward for small test sets"},
      {"empty-cases", "empty references or predictions make overlap and distance metrics undefined"},
      {"missing-scores", "multi-threshold metrics need predicted class scores"},
      {"froc-range", "FROC scores depend on the FPPI range of the x-axis"},
      {"calibration-binning", "binned calibration errors depend on the binning scheme"},
      {"hierarchical-data", "aggregate within a hierarchy level (e.g. patient) before aggregating across it"},
      {"per-class-aggregation", "pooled aggregates can mask classes that perform poorly"},
      {"stratification", "subgroup performance can differ from the overall aggregate"},
      {"unbounded-ranking", "metrics without bounds need normalisation before ranking"},
  };
  return table;
}

namespace {

struct Rule {
  const char* code;
  const char* rule;
  const char* anchor;
  Severity severity;
};

constexpr Rule kRules[] = {
    {"P1", "category_mismatch", "problem-category", Severity::warn},
    {"P2.1", "per_class_thresholds", "global-threshold", Severity::warn},
    {"P2.1", "redundant_pair", "related-metrics", Severity::info},
    {"P2.2", "size_variability", "size-variability", Severity::warn},
    {"P2.2", "small_structures", "small-structures", Severity::warn},
    {"P2.3", "imbalance", "class-imbalance", Severity::warn},
    {"P2.3", "small_test_set", "calibration-sample-size", Severity::warn},
    {"P2.4", "empty_cases", "empty-cases", Severity::warn},
    {"P2.4", "no_scores", "missing-scores", Severity::error},
    {"P3.1", "binning_unset", "calibration-binning", Severity::warn},
    {"P3.1", "froc_range", "froc-range", Severity::warn},
    {"P3.2", "hierarchy_ignored", "hierarchical-data", Severity::warn},
    {"P3.2", "no_per_class", "per-class-aggregation", Severity::warn},
    {"P3.2", "strata_unused", "stratification", Severity::info},
    {"P3.5", "unbounded_in_rank", "unbounded-ranking", Severity::warn},
};

const Rule& rule_of(std::string_view rule) {
  for (const auto& r : kRules) {
    if (r.rule == rule) return r;
  }
  throw Error("no such lint rule");
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += ",";
    out += s;
  }
  return out;
}

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

std::vector<std::pair<std::string, std::string>> lint_rules() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& r : kRules) out.emplace_back(r.code, r.rule);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PitfallWarning> lint(const DatasetFingerprint& fp, const MetricSelection& sel,
                                 const LinterConfig& config) {
  std::vector<const MetricInfo*> metrics;
  for (const auto& id : sel.metrics) metrics.push_back(&metric_info(id));
  auto selected = [&](std::string_view id) { return contains(sel.metrics, id); };
  auto matching = [&](auto pred) {
    std::vector<std::string> ids;
    for (const auto* m : metrics) {
      if (pred(*m)) ids.push_back(m->id);
    }
    return ids;
  };

  std::vector<PitfallWarning> out;
  auto fire = [&](std::string_view rule, std::string message,
                  std::map<std::string, std::string> features) {
    const Rule& r = rule_of(rule);
    out.push_back({r.code, r.rule, r.severity, std::move(message), std::move(features), r.anchor});
  };

  const std::string task(to_string(fp.task));
  // A binary classifier reports one positive class.
  const int foreground_classes = fp.task == Task::ImLC   ? (fp.num_classes > 2 ? fp.num_classes : 1)
                                 : fp.task == Task::SemS ? fp.num_classes - 1
                                                         : static_cast<int>(fp.class_prevalences.size());

  if (auto bad = matching([&](const MetricInfo& m) { return !m.valid_for(fp.task); }); !bad.empty()) {
    fire("category_mismatch", "metrics not defined for task " + task + ": " + join(bad),
         {{"metrics", join(bad)}, {"task", task}});
  }
  if (selected("dsc") && selected("iou")) {
    fire("redundant_pair", "DSC and IoU are both selected; one determines the other",
         {{"metrics", "dsc,iou"}});
  }
  if (sel.threshold_policy == ThresholdPolicy::per_class && fp.task == Task::ImLC &&
      fp.num_classes > 2) {
    fire("per_class_thresholds",
         "per-class tuned thresholds cannot all hold at once in multi-class deployment",
         {{"num_classes", std::to_string(fp.num_classes)}, {"threshold_policy", "per_class"}});
  }

  const auto overlap = matching([](const MetricInfo& m) { return m.overlap_like; });
  if (!overlap.empty()) {
    std::vector<std::string> small, variable;
    for (const auto& [k, s] : fp.structure_sizes) {
      if (s.n_structures > 0 && s.median < config.small_structure_px) small.push_back(std::to_string(k));
      if (s.n_structures > 0 && s.cv > config.size_cv) variable.push_back(std::to_string(k));
    }
    if (!small.empty()) {
      std::map<std::string, std::string> f{{"classes", join(small)}, {"metrics", join(overlap)},
                                           {"threshold_px", fmt(config.small_structure_px)}};
      for (const auto& k : small) f["median_px." + k] = fmt(fp.structure_sizes.at(std::stoi(k)).median);
      fire("small_structures", "median structure size below " + fmt(config.small_structure_px) +
                                   " px for classes " + join(small),
           std::move(f));
    }
    if (!variable.empty()) {
      std::map<std::string, std::string> f{{"classes", join(variable)}, {"metrics", join(overlap)},
                                           {"threshold_cv", fmt(config.size_cv)}};
      for (const auto& k : variable) f["cv." + k] = fmt(fp.structure_sizes.at(std::stoi(k)).cv);
      fire("size_variability", "structure sizes vary strongly for classes " + join(variable),
           std::move(f));
    }
  }

  const double ratio = fp.prevalence_ratio();
  if (ratio > config.imbalance_ratio) {
    auto hit = matching([](const MetricInfo& m) {
      return m.id == "accuracy" || m.id == "balanced_accuracy" || m.id == "auroc";
    });
    if (!hit.empty()) {
      fire("imbalance",
           "prevalence ratio " + fmt(ratio) + " with prevalence-blind metrics " + join(hit) +
               "; report predictive values as well",
           {{"metrics", join(hit)}, {"prevalence_ratio", fmt(ratio)},
            {"threshold", fmt(config.imbalance_ratio)}});
    }
  }
  if (fp.n_items < config.small_test_set) {
    auto hit = matching([](const MetricInfo& m) { return m.family == MetricFamily::calibration; });
    if (!hit.empty()) {
      fire("small_test_set",
           std::to_string(fp.n_items) + " items is a small test set for calibration metrics " +
               join(hit),
           {{"metrics", join(hit)}, {"n_items", std::to_string(fp.n_items)},
            {"threshold", std::to_string(config.small_test_set)}});
    }
  }
  if (fp.empty_reference_count + fp.empty_prediction_count > 0 && !sel.missing_policy_explicit) {
    auto hit = matching([](const MetricInfo& m) {
      return m.overlap_like || m.family == MetricFamily::boundary;
    });
    if (!hit.empty()) {
      fire("empty_cases",
           "empty references or predictions make " + join(hit) +
               " undefined and no missing-value policy is set",
           {{"empty_predictions", std::to_string(fp.empty_prediction_count)},
            {"empty_references", std::to_string(fp.empty_reference_count)},
            {"metrics", join(hit)}});
    }
  }
  if (!fp.has_scores) {
    auto hit = matching([](const MetricInfo& m) { return m.requires_scores; });
    if (!hit.empty()) {
      fire("no_scores", "metrics " + join(hit) + " need predicted class scores, none were given",
           {{"has_scores", "false"}, {"metrics", join(hit)}});
    }
  }
  if (selected("froc_score") && !sel.fppi_range_explicit) {
    fire("froc_range", "FROC score requested without an explicit FPPI range",
         {{"metrics", "froc_score"}});
  }
  if (!sel.binning_explicit) {
    auto hit = matching([](const MetricInfo& m) {
      return m.id == "ece" || m.id == "mce" || m.id == "cwce";
    });
    if (!hit.empty()) {
      fire("binning_unset", "binned calibration metrics " + join(hit) + " without an explicit binning scheme",
           {{"metrics", join(hit)}});
    }
  }
  {
    std::vector<std::string> ignored;
    for (const auto& k : fp.hierarchy_keys) {
      if (!contains(sel.grouping, k)) ignored.push_back(k);
    }
    if (!ignored.empty()) {
      fire("hierarchy_ignored", "hierarchy keys " + join(ignored) + " are not used for grouping",
           {{"grouping", join(sel.grouping)}, {"keys", join(ignored)}});
    }
  }
  if (foreground_classes > 1 && !sel.per_class_report && !contains(sel.grouping, "class")) {
    fire("no_per_class", "multi-class task aggregated without per-class results",
         {{"num_classes", std::to_string(foreground_classes)}});
  }
  {
    std::vector<std::string> unused;
    for (const auto& k : fp.strata_keys) {
      if (!contains(sel.stratify_by, k)) unused.push_back(k);
    }
    if (!unused.empty()) {
      fire("strata_unused", "strata keys " + join(unused) + " have no stratified report",
           {{"keys", join(unused)}});
    }
  }
  if (sel.ranking && !sel.rank_normalized) {
    auto hit = matching([](const MetricInfo& m) { return !m.bounded(); });
    if (!hit.empty()) {
      fire("unbounded_in_rank", "unbounded metrics " + join(hit) + " used in a ranking without normalisation",
           {{"metrics", join(hit)}});
    }
  }

  std::sort(out.begin(), out.end(), [](const PitfallWarning& a, const PitfallWarning& b) {
    return std::tie(a.code, a.rule) < std::tie(b.code, b.rule);
  });
  return out;
}

bool has_blocking(const std::vector<PitfallWarning>& warnings, const LinterConfig& config) {
  if (config.warn_only) return false;
  return std::any_of(warnings.begin(), warnings.end(),
                     [](const PitfallWarning& w) { return w.severity == Severity::error; });
}

std::string format_warnings(const std::vector<PitfallWarning>& warnings) {
  std::ostringstream os;
  for (const auto& w : warnings) {
    os << w.code << ' ' << w.rule << ' ' << to_string(w.severity) << ' ' << w.anchor << ": "
       << w.message << " [";
    bool first = true;
    for (const auto& [k, v] : w.features) {
      os << (first ? "" : ", ") << k << '=' << v;
      first = false;
    }
    os << "]\n";
  }
  return os.str();
}

}  // namespace valmet
