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

#include "valmet/pipeline.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "valmet/calibration.hpp"
#include "valmet/confusion.hpp"
#include "valmet/counting.hpp"
#include "valmet/kernels/parallel.hpp"
#include "valmet/segmentation.hpp"

namespace valmet {

LintFailure::LintFailure(std::vector<PitfallWarning> warnings)
    : Error("linter reported blocking pitfalls"), warnings_(std::move(warnings)) {}

EvaluationError::EvaluationError(std::string module, const std::string& message)
    : Error(module + ": " + message), module_(std::move(module)) {}

namespace {

template <typename Fn>
auto attributed(const char* module, Fn&& fn) {
  try {
    return fn();
  } catch (const EvaluationError&) {
    throw;
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw EvaluationError(module, e.what());
  }
}

struct RecordSink {
  std::vector<MetricRecord> records;
  const EvaluationConfig& cfg;
  std::string item_id;
  Metadata meta;

  void add(std::string_view metric, std::optional<int> class_id, const MetricValue& v) {
    if (!cfg.has_metric(metric)) return;
    records.push_back({item_id, class_id, std::string(metric), v, meta});
  }
};

bool any_selected(const EvaluationConfig& cfg, std::initializer_list<std::string_view> ids) {
  return std::any_of(ids.begin(), ids.end(), [&](std::string_view id) { return cfg.has_metric(id); });
}

// ---------------------------------------------------------------------------
// Image-level classification

std::vector<int> predicted_labels(const std::vector<ClassificationItem>& items, int c,
                                  const EvaluationConfig& cfg) {
  std::vector<int> out;
  out.reserve(items.size());
  for (const auto& it : items) {
    if (it.pred_class) {
      out.push_back(*it.pred_class);
      continue;
    }
    if (c == 2 && cfg.threshold_policy == ThresholdPolicy::global) {
      const ClassScores s{it.item_id, it.scores, it.ref_class};
      out.push_back(threshold_scores(std::span(&s, 1), cfg.threshold, cfg.positive_class).front());
    } else if (cfg.threshold_policy == ThresholdPolicy::per_class) {
      if (cfg.class_thresholds.size() != it.scores.size()) {
        throw ParameterError("per_class threshold policy needs one threshold per class");
      }
      int best = -1;
      for (size_t k = 0; k < it.scores.size(); ++k) {
        if (it.scores[k] > cfg.class_thresholds[k] &&
            (best < 0 || it.scores[k] > it.scores[static_cast<size_t>(best)])) {
          best = static_cast<int>(k);
        }
      }
      out.push_back(best >= 0 ? best : argmax_class(it.scores));
    } else {
      out.push_back(argmax_class(it.scores));
    }
  }
  return out;
}

void evaluate_classification(const std::vector<ClassificationItem>& items, int c,
                             const EvaluationConfig& cfg, RecordSink& sink,
                             std::vector<CurveRecord>* curves) {
  if (c == 2 && (cfg.positive_class < 0 || cfg.positive_class > 1)) {
    throw EvaluationError("confusion_core", "positive_class must be 0 or 1");
  }
  std::vector<int> refs;
  for (const auto& it : items) refs.push_back(it.ref_class);
  const auto preds = attributed("confusion_core", [&] { return predicted_labels(items, c, cfg); });
  const MultiConfusion m = attributed("confusion_core", [&] { return confusion_multi(refs, preds, c); });
  std::vector<int> classes;
  if (c == 2) {
    classes.push_back(cfg.positive_class);
  } else {
    for (int k = 0; k < c; ++k) classes.push_back(k);
  }

  attributed("counting_metrics", [&] {
    for (int k : classes) {
      const BinaryConfusion b = per_class_view(m, k);
      sink.add("sensitivity", k, sensitivity(b));
      sink.add("specificity", k, specificity(b));
      sink.add("ppv", k, ppv(b));
      sink.add("npv", k, npv(b));
      if (const auto* s = cfg.metric("f_beta")) sink.add("f_beta", k, f_beta(b, s->beta));
      sink.add("lr_plus", k, lr_plus(b));
      if (const auto* s = cfg.metric("net_benefit")) {
        sink.add("net_benefit", k, net_benefit(b, s->threshold_probability));
      }
    }
    const auto summary = multiclass_summary(m);
    sink.add("accuracy", std::nullopt, summary.accuracy);
    sink.add("balanced_accuracy", std::nullopt, summary.balanced_accuracy);
    sink.add("youden_j", std::nullopt, summary.youden_j);
    sink.add("mcc", std::nullopt, mcc(m));
    sink.add("kappa", std::nullopt, kappa(m));
    if (const auto* s = cfg.metric("weighted_kappa")) {
      const auto w = s->weights == "quadratic" ? CostMatrix::quadratic(c) : CostMatrix::ordinal(c);
      sink.add("weighted_kappa", std::nullopt, kappa(m, w));
    }
    if (const auto* s = cfg.metric("expected_cost")) {
      const CostMatrix costs = s->costs.empty() ? CostMatrix(c) : CostMatrix(c, s->costs);
      std::optional<std::span<const double>> priors;
      if (!s->priors.empty()) priors = std::span<const double>(s->priors);
      sink.add("expected_cost", std::nullopt, expected_cost(m, costs, priors).value);
    }
    return 0;
  });

  const bool needs_scores = any_selected(cfg, {"auroc", "partial_auroc", "ap", "ece", "mce", "cwce",
                                               "canonical_ce", "brier", "nll"}) ||
                            curves != nullptr;
  if (!needs_scores) return;
  std::vector<ClassScores> scored;
  for (const auto& it : items) {
    if (it.scores.empty()) {
      throw EvaluationError("curve_metrics", "item '" + it.item_id + "' has no class scores");
    }
    scored.push_back({it.item_id, it.scores, it.ref_class});
  }

  attributed("curve_metrics", [&] {
    for (int k : classes) {
      std::vector<double> s;
      std::vector<int> labels;
      for (const auto& it : scored) {
        s.push_back(it.scores[static_cast<size_t>(k)]);
        labels.push_back(it.ref_class == k ? 1 : 0);
      }
      const bool want_roc = any_selected(cfg, {"auroc", "partial_auroc"}) || curves;
      if (want_roc) {
        const auto roc = roc_auroc(s, labels);
        sink.add("auroc", k, roc.auroc);
        if (const auto* spec = cfg.metric("partial_auroc")) {
          sink.add("partial_auroc", k,
                   roc.auroc ? partial_auroc(roc.curve, spec->lo, spec->hi, spec->normalization)
                             : roc.auroc);
        }
        if (curves) curves->push_back({"roc", k, roc.curve, "auroc", roc.auroc});
      }
      if (cfg.has_metric("ap") || curves) {
        const auto* spec = cfg.metric("ap");
        const auto pr = pr_ap(s, labels, spec ? spec->ties : TieStrategy::grouped);
        sink.add("ap", k, pr.ap);
        if (curves) curves->push_back({"pr", k, pr.curve, "ap", pr.ap});
      }
    }
    return 0;
  });

  attributed("calibration_metrics", [&] {
    const auto scheme = cfg.effective_binning();
    if (any_selected(cfg, {"ece", "mce"})) {
      const auto r = ece_mce(scored, scheme);
      sink.add("ece", std::nullopt, r.ece);
      sink.add("mce", std::nullopt, r.mce);
    }
    if (cfg.has_metric("cwce")) sink.add("cwce", std::nullopt, cwce(scored, scheme));
    if (cfg.has_metric("canonical_ce")) {
      sink.add("canonical_ce", std::nullopt, canonical_ce_exact(scored).value);
    }
    if (any_selected(cfg, {"brier", "nll"})) {
      const auto p = proper_scores(scored);
      sink.add("brier", std::nullopt, p.brier);
      sink.add("nll", std::nullopt, p.nll);
    }
    return 0;
  });
}

// ---------------------------------------------------------------------------
// Pixel tasks

void pixel_metrics(const LabelMap& ref, const LabelMap& pred, int32_t k, std::optional<int> class_id,
                   const EvaluationConfig& cfg, RecordSink& sink) {
  if (any_selected(cfg, {"sensitivity", "specificity", "ppv", "npv", "f_beta", "dsc", "iou"})) {
    const auto* fb = cfg.metric("f_beta");
    const auto o = pixel_overlap(ref, pred, k, fb ? fb->beta : 1.0);
    const auto rates = per_class_rates(o.cardinalities);
    sink.add("sensitivity", class_id, rates.sensitivity);
    sink.add("specificity", class_id, rates.specificity);
    sink.add("ppv", class_id, rates.ppv);
    sink.add("npv", class_id, rates.npv);
    sink.add("f_beta", class_id, o.f_beta);
    sink.add("dsc", class_id, o.dsc);
    sink.add("iou", class_id, o.iou);
  }
  if (cfg.has_metric("cl_dice")) sink.add("cl_dice", class_id, cl_dice(ref, pred, k).value);
  if (const auto* s = cfg.metric("boundary_iou")) {
    sink.add("boundary_iou", class_id, boundary_iou(ref, pred, k, s->d));
  }
  if (const auto* s = cfg.metric("nsd")) sink.add("nsd", class_id, nsd(ref, pred, k, s->tau));
  if (any_selected(cfg, {"hd", "hd95", "assd", "masd"})) {
    std::optional<double> pct;
    if (const auto* s = cfg.metric("hd95")) pct = s->percentile;
    const auto d = surface_distances(ref, pred, k, pct);
    sink.add("hd", class_id, d.hd);
    sink.add("hd95", class_id, d.hd_pct);
    sink.add("assd", class_id, d.assd);
    sink.add("masd", class_id, d.masd);
  }
  if (any_selected(cfg, {"volume_abs", "volume_rel"})) {
    const auto v = volume_error(ref, pred, k);
    sink.add("volume_abs", class_id, v.absolute);
    sink.add("volume_rel", class_id, v.relative);
  }
}

LabelMap foreground(const LabelMap& m) {
  std::vector<int32_t> data(m.data().size());
  for (size_t i = 0; i < data.size(); ++i) data[i] = m.data()[i] != 0 ? 1 : 0;
  return LabelMap(m.width(), m.height(), std::move(data), m.spacing());
}

void evaluate_semantic(const SegmentationItem& it, int c, const EvaluationConfig& cfg, RecordSink& sink) {
  attributed("segmentation_metrics", [&] {
    for (int k = 1; k < c; ++k) pixel_metrics(it.reference, it.prediction, k, k, cfg, sink);
    return 0;
  });
}

void evaluate_instance(const SegmentationItem& it, const EvaluationConfig& cfg, RecordSink& sink) {
  attributed("detection_eval", [&] {
    if (any_selected(cfg, {"pq", "sq", "dq", "sensitivity", "ppv", "f_beta"})) {
      const auto r = panoptic_quality(it.reference, it.prediction, cfg.panoptic);
      sink.add("pq", std::nullopt, r.pq);
      sink.add("sq", std::nullopt, r.sq);
      sink.add("dq", std::nullopt, r.dq);
      const BinaryConfusion b{r.tp, r.fn, r.fp, 0};
      sink.add("sensitivity", std::nullopt, sensitivity(b));
      sink.add("ppv", std::nullopt, ppv(b));
      if (const auto* s = cfg.metric("f_beta")) sink.add("f_beta", std::nullopt, f_beta(b, s->beta));
    }
    return 0;
  });
  attributed("segmentation_metrics", [&] {
    RecordSink pixel{{}, cfg, sink.item_id, sink.meta};
    pixel_metrics(foreground(it.reference), foreground(it.prediction), 1, std::nullopt, cfg, pixel);
    for (auto& r : pixel.records) {
      // object-level counting metrics come from the instance matching
      if (r.metric_id == "sensitivity" || r.metric_id == "ppv" || r.metric_id == "f_beta") continue;
      sink.records.push_back(std::move(r));
    }
    return 0;
  });
}

void evaluate_detection_image(const DetectionImage& im, const EvaluationConfig& cfg, RecordSink& sink) {
  if (!any_selected(cfg, {"sensitivity", "ppv", "f_beta"})) return;
  attributed("detection_eval", [&] {
    const auto m = assign(im.preds, im.refs, cfg.localization, cfg.assignment);
    const BinaryConfusion b{m.tp(), m.fn(), m.fp(), 0};
    sink.add("sensitivity", std::nullopt, sensitivity(b));
    sink.add("ppv", std::nullopt, ppv(b));
    if (const auto* s = cfg.metric("f_beta")) sink.add("f_beta", std::nullopt, f_beta(b, s->beta));
    return 0;
  });
}

void evaluate_detection_dataset(const Dataset& ds, const EvaluationConfig& cfg, RecordSink& sink,
                                std::vector<CurveRecord>* curves) {
  if (!any_selected(cfg, {"ap", "froc_score"}) && !curves) return;
  attributed("detection_eval", [&] {
    std::vector<ImageObjects> images;
    for (const auto& im : ds.detection) images.push_back({im.image_id, im.refs, im.preds});
    const auto dc = dataset_curves(images, cfg.localization, cfg.assignment, cfg.sensitivity_mode,
                                   cfg.effective_fppi_range(), cfg.froc_normalize);
    sink.add("ap", std::nullopt, dc.ap);
    sink.add("froc_score", std::nullopt, dc.froc_score);
    if (curves) {
      curves->push_back({"pr", std::nullopt, dc.pr, "ap", dc.ap});
      curves->push_back({"froc", std::nullopt, dc.froc, "froc_score", dc.froc_score});
    }
    return 0;
  });
}

}  // namespace

Dataset load_dataset(const EvaluationConfig& config) {
  return load_dataset(config.inputs, config.task, config.num_classes);
}

std::vector<PitfallWarning> lint_dataset(const EvaluationConfig& config, const Dataset& dataset) {
  return lint(fingerprint(dataset, config.declarations), config.selection(), config.linter);
}

std::vector<MetricRecord> evaluate_records(const EvaluationConfig& cfg, const Dataset& ds,
                                           std::vector<CurveRecord>* curves) {
  std::vector<MetricRecord> out;
  if (ds.task == Task::ImLC) {
    RecordSink sink{{}, cfg, std::string(kDatasetItem), {}};
    evaluate_classification(ds.classification, ds.num_classes, cfg, sink, curves);
    out = std::move(sink.records);
  } else {
    std::vector<std::vector<MetricRecord>> slots(ds.size());
    kernels::parallel_for(static_cast<int64_t>(ds.size()), [&](int64_t i) {
      const auto idx = static_cast<size_t>(i);
      RecordSink sink{{}, cfg, ds.id(idx), ds.meta(idx)};
      switch (ds.task) {
        case Task::SemS: evaluate_semantic(ds.segmentation[idx], ds.num_classes, cfg, sink); break;
        case Task::InS: evaluate_instance(ds.segmentation[idx], cfg, sink); break;
        case Task::ObD: evaluate_detection_image(ds.detection[idx], cfg, sink); break;
        case Task::ImLC: break;
      }
      slots[idx] = std::move(sink.records);
    });
    for (auto& s : slots) {
      for (auto& r : s) out.push_back(std::move(r));
    }
    if (ds.task == Task::ObD) {
      RecordSink sink{{}, cfg, std::string(kDatasetItem), {}};
      evaluate_detection_dataset(ds, cfg, sink, curves);
      for (auto& r : sink.records) out.push_back(std::move(r));
    }
  }
  sort_records(out);
  return out;
}

std::vector<CurveRecord> evaluate_curves(const EvaluationConfig& cfg, const Dataset& ds) {
  std::vector<CurveRecord> curves;
  if (ds.task == Task::ImLC) {
    RecordSink sink{{}, cfg, std::string(kDatasetItem), {}};
    evaluate_classification(ds.classification, ds.num_classes, cfg, sink, &curves);
  } else if (ds.task == Task::ObD) {
    RecordSink sink{{}, cfg, std::string(kDatasetItem), {}};
    evaluate_detection_dataset(ds, cfg, sink, &curves);
  } else {
    throw EvaluationError("curve_metrics", "threshold curves need scores (ImLC or ObD tasks)");
  }
  return curves;
}

AggregationSection aggregate_records(const std::vector<MetricRecord>& records, AggregateOperator op,
                                     const std::vector<std::string>& grouping, MissingPolicy policy,
                                     bool per_class, const std::vector<std::string>& stratify_by) {
  return attributed("aggregation_engine", [&] {
    AggregationSection out;
    std::map<std::string, std::vector<MetricRecord>> per_item, by_metric;
    for (const auto& r : records) {
      by_metric[r.metric_id].push_back(r);
      if (r.item_id != kDatasetItem) per_item[r.metric_id].push_back(r);
    }
    for (const auto& [metric, recs] : per_item) {
      out.aggregates[metric] = aggregate(recs, op, grouping, policy);
      for (const auto& key : stratify_by) out.stratified[metric].push_back(stratify(recs, key, op, policy));
    }
    if (per_class) {
      for (const auto& [metric, recs] : by_metric) {
        if (std::any_of(recs.begin(), recs.end(), [](const MetricRecord& r) { return r.class_id.has_value(); })) {
          out.per_class[metric] = per_class_summary(recs, op, policy);
        }
      }
    }
    return out;
  });
}

Report run(const EvaluationConfig& cfg, const Dataset& input) {
  // Reductions follow item order, so results only match across input orders
  // after sorting.
  std::optional<Dataset> sorted;
  if (!input.is_canonical()) sorted = input.canonical();
  const Dataset& ds = sorted ? *sorted : input;
  Report report;
  report.config_json = config_to_json(cfg);
  const DatasetFingerprint fp = fingerprint(ds, cfg.declarations);
  report.warnings = lint(fp, cfg.selection(), cfg.linter);
  if (has_blocking(report.warnings, cfg.linter)) throw LintFailure(report.warnings);
  attributed("cli_io", [&] {
    cfg.validate_for_run();
    return 0;
  });
  // Scoreless inputs still get counting metrics, just no curves.
  report.records = evaluate_records(cfg, ds, fp.has_scores ? &report.curves : nullptr);
  report.aggregation = aggregate_records(report.records, cfg.op, cfg.grouping,
                                         cfg.effective_missing_policy(), cfg.per_class, cfg.stratify_by);

  if (ds.task == Task::ImLC && !cfg.stratify_by.empty()) {
    attributed("aggregation_engine", [&] {
      for (const auto& key : cfg.stratify_by) {
        std::map<std::string, std::vector<ClassificationItem>> strata;
        std::string offenders;
        for (const auto& it : ds.classification) {
          const auto f = it.meta.find(key);
          if (f == it.meta.end()) {
            offenders += (offenders.empty() ? "" : ", ") + it.item_id;
          } else {
            strata[f->second].push_back(it);
          }
        }
        if (!offenders.empty()) {
          throw AggregationError("items without stratification key '" + key + "': " + offenders);
        }
        std::map<std::string, std::vector<std::pair<std::string, MetricRecord>>> per_metric;
        for (const auto& [label, items] : strata) {
          RecordSink sink{{}, cfg, std::string(kDatasetItem), {{key, label}}};
          evaluate_classification(items, ds.num_classes, cfg, sink, nullptr);
          for (auto& r : sink.records) per_metric[r.metric_id].emplace_back(label, std::move(r));
        }
        for (const auto& overall : report.records) {
          auto& list = per_metric[overall.metric_id];
          StratifiedSummary s;
          s.key = key + (overall.class_id ? "|class=" + std::to_string(*overall.class_id) : "");
          s.overall = overall.value;
          std::optional<double> lo, hi;
          for (const auto& [label, rec] : list) {
            if (rec.class_id != overall.class_id) continue;
            s.strata.push_back({label, rec.value, static_cast<int64_t>(strata.at(label).size())});
            if (rec.value) {
              lo = lo ? std::min(*lo, rec.value.value) : rec.value.value;
              hi = hi ? std::max(*hi, rec.value.value) : rec.value.value;
            }
          }
          s.max_gap = lo ? MetricValue::of(*hi - *lo) : MetricValue::nan(NanReason::empty_set);
          report.aggregation.stratified[overall.metric_id].push_back(std::move(s));
        }
      }
      return 0;
    });
  }
  return report;
}

Report run(const EvaluationConfig& config) { return run(config, load_dataset(config)); }

}  // namespace valmet
