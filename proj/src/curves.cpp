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

#include "valmet/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace valmet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<size_t> descending_order(std::span<const double> scores) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  return order;
}

void check_labels(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ShapeError("scores and labels differ in length");
  for (double s : scores) {
    if (std::isnan(s)) throw ParameterError("NaN score");
  }
  for (int l : labels) {
    if (l != 0 && l != 1) throw ParameterError("labels must be 0 or 1");
  }
}

}  // namespace

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::fpr: return "fpr";
    case Axis::sensitivity: return "sensitivity";
    case Axis::specificity: return "specificity";
    case Axis::recall: return "recall";
    case Axis::precision: return "precision";
    case Axis::fppi: return "fppi";
  }
  return "fpr";
}

Axis axis_from_string(std::string_view name) {
  for (Axis a : {Axis::fpr, Axis::sensitivity, Axis::specificity, Axis::recall,
                 Axis::precision, Axis::fppi}) {
    if (to_string(a) == name) return a;
  }
  throw ParameterError("unknown axis '" + std::string(name) + "'");
}

std::string_view to_string(TieStrategy ties) {
  return ties == TieStrategy::grouped ? "grouped" : "per_prediction";
}

TieStrategy tie_strategy_from_string(std::string_view name) {
  if (name == "grouped") return TieStrategy::grouped;
  if (name == "per_prediction") return TieStrategy::per_prediction;
  throw ParameterError("unknown tie strategy '" + std::string(name) + "'");
}

std::string_view to_string(SensitivityMode mode) {
  return mode == SensitivityMode::pooled ? "pooled" : "per_image_averaged";
}

SensitivityMode sensitivity_mode_from_string(std::string_view name) {
  if (name == "pooled") return SensitivityMode::pooled;
  if (name == "per_image_averaged") return SensitivityMode::per_image_averaged;
  throw ParameterError("unknown sensitivity mode '" + std::string(name) + "'");
}

void FppiRange::validate() const {
  if (lo != 0.0) throw ParameterError("FPPI range must start at 0");
  if (!(hi > 0.0) || std::isinf(hi)) throw ParameterError("FPPI range upper bound must be positive");
}

RocResult roc_auroc(std::span<const double> scores, std::span<const int> labels) {
  check_labels(scores, labels);
  RocResult result;
  result.curve.x_axis = Axis::fpr;
  result.curve.y_axis = Axis::sensitivity;

  const int64_t positives = std::count(labels.begin(), labels.end(), 1);
  const int64_t negatives = static_cast<int64_t>(labels.size()) - positives;
  if (positives == 0 || negatives == 0) {
    result.auroc = MetricValue::nan(NanReason::empty_set);
    return result;
  }

  const auto order = descending_order(scores);
  result.curve.points.push_back({0.0, 0.0});
  result.curve.thresholds.push_back(kInf);
  // Trapezoids in count units: twice the number of correctly ordered
  // pairs, ties counted once. One division at the end keeps it exact.
  int64_t tp = 0, fp = 0, twice_pairs = 0;
  for (size_t i = 0; i < order.size();) {
    const double t = scores[order[i]];
    const int64_t tp0 = tp, fp0 = fp;
    for (; i < order.size() && scores[order[i]] == t; ++i) {
      labels[order[i]] == 1 ? ++tp : ++fp;
    }
    twice_pairs += (fp - fp0) * (tp0 + tp);
    result.curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                                   static_cast<double>(tp) / static_cast<double>(positives)});
    result.curve.thresholds.push_back(t);
  }
  result.auroc = MetricValue::of(static_cast<double>(twice_pairs) /
                                 (2.0 * static_cast<double>(positives) * static_cast<double>(negatives)));
  return result;
}

double trapezoid_area(const Curve& curve) {
  double area = 0.0;
  for (size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.x - a.x) * (a.y + b.y) / 2.0;
  }
  return area;
}

MetricValue partial_auroc(const Curve& roc, double lo, double hi, PartialAucNormalization norm) {
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) throw ParameterError("partial AUROC range must satisfy 0 <= lo < hi <= 1");
  if (roc.points.size() < 2) return MetricValue::nan(NanReason::empty_set);
  double area = 0.0;
  for (size_t i = 1; i < roc.points.size(); ++i) {
    const auto& p = roc.points[i - 1];
    const auto& q = roc.points[i];
    if (q.x <= p.x) continue;
    const double a = std::max(p.x, lo);
    const double b = std::min(q.x, hi);
    if (b <= a) continue;
    const double slope = (q.y - p.y) / (q.x - p.x);
    const double ya = p.y + slope * (a - p.x);
    const double yb = p.y + slope * (b - p.x);
    area += (b - a) * (ya + yb) / 2.0;
  }
  switch (norm) {
    case PartialAucNormalization::none:
      return MetricValue::of(area);
    case PartialAucNormalization::width:
      return MetricValue::of(area / (hi - lo));
    case PartialAucNormalization::standardized: {
      const double min_area = (hi * hi - lo * lo) / 2.0;
      const double max_area = hi - lo;
      return MetricValue::of(0.5 * (1.0 + (area - min_area) / (max_area - min_area)));
    }
  }
  return MetricValue::of(area);
}

PrResult pr_ap(std::span<const double> scores, std::span<const int> labels, TieStrategy ties,
               std::optional<int64_t> total_positives) {
  check_labels(scores, labels);
  PrResult result;
  result.curve.x_axis = Axis::recall;
  result.curve.y_axis = Axis::precision;
  const int64_t labelled = std::count(labels.begin(), labels.end(), 1);
  const int64_t positives = total_positives.value_or(labelled);
  if (positives < labelled) throw ParameterError("total positives below the number of positive labels");
  if (positives == 0) {
    result.ap = MetricValue::nan(NanReason::empty_set);
    return result;
  }

  const auto order = descending_order(scores);
  int64_t tp = 0, fp = 0;
  for (size_t i = 0; i < order.size();) {
    const double t = scores[order[i]];
    if (ties == TieStrategy::grouped) {
      for (; i < order.size() && scores[order[i]] == t; ++i) {
        labels[order[i]] == 1 ? ++tp : ++fp;
      }
    } else {
      labels[order[i]] == 1 ? ++tp : ++fp;
      ++i;
    }
    result.curve.points.push_back({static_cast<double>(tp) / static_cast<double>(positives),
                                   static_cast<double>(tp) / static_cast<double>(tp + fp)});
    result.curve.thresholds.push_back(t);
  }
  result.ap = average_precision(result.curve);
  return result;
}

MetricValue average_precision(const Curve& pr) {
  double ap = 0.0;
  double prev_recall = 0.0;
  bool any = false;
  for (const auto& p : pr.points) {
    if (std::isnan(p.x) || std::isnan(p.y)) continue;
    ap += (p.x - prev_recall) * p.y;
    prev_recall = p.x;
    any = true;
  }
  if (!any) return MetricValue::of(0.0);
  return MetricValue::of(ap);
}

FrocResult froc(std::span<const ImageHits> images, const FppiRange& range, bool normalize,
                SensitivityMode mode) {
  range.validate();
  FrocResult result;
  result.curve.x_axis = Axis::fppi;
  result.curve.y_axis = Axis::sensitivity;
  if (images.empty()) {
    result.score = MetricValue::nan(NanReason::empty_set);
    return result;
  }

  // (score desc, image_id asc, input position asc) keeps the sweep
  // independent of how images were gathered.
  struct Entry {
    double score;
    size_t image;
    size_t pos;
    bool tp;
  };
  std::vector<Entry> entries;
  int64_t total_refs = 0;
  int64_t images_with_refs = 0;
  for (size_t i = 0; i < images.size(); ++i) {
    total_refs += images[i].num_refs;
    if (images[i].num_refs > 0) ++images_with_refs;
    for (size_t j = 0; j < images[i].hits.size(); ++j) {
      const auto& h = images[i].hits[j];
      if (std::isnan(h.score)) throw ParameterError("NaN detection score");
      entries.push_back({h.score, i, j, h.true_positive});
    }
  }
  if (total_refs == 0) {
    result.score = MetricValue::nan(NanReason::empty_set);
    return result;
  }
  std::sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
    if (a.score != b.score) return a.score > b.score;
    if (images[a.image].image_id != images[b.image].image_id)
      return images[a.image].image_id < images[b.image].image_id;
    if (a.image != b.image) return a.image < b.image;
    return a.pos < b.pos;
  });

  const double n_images = static_cast<double>(images.size());
  std::vector<int64_t> tp_per_image(images.size(), 0);
  int64_t tp = 0, fp = 0;
  auto sensitivity_now = [&]() {
    if (mode == SensitivityMode::pooled) return static_cast<double>(tp) / static_cast<double>(total_refs);
    double sum = 0.0;
    for (size_t i = 0; i < images.size(); ++i) {
      if (images[i].num_refs > 0) {
        sum += static_cast<double>(tp_per_image[i]) / static_cast<double>(images[i].num_refs);
      }
    }
    return sum / static_cast<double>(images_with_refs);
  };

  result.curve.points.push_back({0.0, 0.0});
  result.curve.thresholds.push_back(kInf);
  for (size_t i = 0; i < entries.size();) {
    const double t = entries[i].score;
    for (; i < entries.size() && entries[i].score == t; ++i) {
      if (entries[i].tp) {
        ++tp;
        ++tp_per_image[entries[i].image];
      } else {
        ++fp;
      }
    }
    result.curve.points.push_back({static_cast<double>(fp) / n_images, sensitivity_now()});
    result.curve.thresholds.push_back(t);
  }
  result.score = MetricValue::of(froc_area(result.curve, range, normalize));
  return result;
}

double froc_area(const Curve& froc_curve, const FppiRange& range, bool normalize) {
  range.validate();
  // Right-continuous step function s(x) = max{y_i : x_i <= x}, 0 before the
  // first point.
  std::vector<CurvePoint> steps;
  double best = 0.0;
  for (const auto& p : froc_curve.points) {
    if (p.y > best || steps.empty()) {
      best = std::max(best, p.y);
      steps.push_back({p.x, best});
    }
  }
  double area = 0.0;
  for (size_t i = 0; i < steps.size(); ++i) {
    const double start = std::max(steps[i].x, range.lo);
    const double end = std::min(i + 1 < steps.size() ? steps[i + 1].x : range.hi, range.hi);
    if (end > start) area += (end - start) * steps[i].y;
  }
  return normalize ? area / (range.hi - range.lo) : area;
}

WorkingPoint working_point(const Curve& curve, Axis axis, double target) {
  const auto& pts = curve.points;
  if (pts.empty()) throw RangeError("empty curve");
  const bool fpr_curve = curve.x_axis == Axis::fpr;
  const Axis reported_x = fpr_curve ? Axis::specificity : curve.x_axis;
  auto report_x = [&](double x) { return fpr_curve ? 1.0 - x : x; };

  const bool on_x = axis == curve.x_axis || (fpr_curve && axis == Axis::specificity);
  if (on_x) {
    const double x = (fpr_curve && axis == Axis::specificity) ? 1.0 - target : target;
    const double lo = pts.front().x, hi = pts.back().x;
    if (!(x >= lo && x <= hi)) throw RangeError("target outside the curve's span");
    size_t left = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].x <= x) left = i;
    }
    if (pts[left].x == x || left + 1 == pts.size()) {
      return {pts[left].y, curve.y_axis, curve.thresholds[left]};
    }
    const auto& a = pts[left];
    const auto& b = pts[left + 1];
    const double y = a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
    return {y, curve.y_axis, curve.thresholds[left + 1]};
  }
  if (axis == curve.y_axis) {
    double lo = pts.front().y, hi = pts.front().y;
    for (const auto& p : pts) {
      lo = std::min(lo, p.y);
      hi = std::max(hi, p.y);
    }
    if (!(target >= lo && target <= hi)) throw RangeError("target outside the curve's span");
    for (size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].y == target) return {report_x(pts[i].x), reported_x, curve.thresholds[i]};
      if (i > 0 && pts[i - 1].y < target && target < pts[i].y) {
        const auto& a = pts[i - 1];
        const auto& b = pts[i];
        const double x = a.x + (b.x - a.x) * (target - a.y) / (b.y - a.y);
        return {report_x(x), reported_x, curve.thresholds[i]};
      }
    }
    throw RangeError("target not reached on the curve");
  }
  throw ParameterError("axis '" + std::string(to_string(axis)) + "' is not an axis of this curve");
}

}  // namespace valmet
