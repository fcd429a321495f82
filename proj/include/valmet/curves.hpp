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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "valmet/metric_value.hpp"

namespace valmet {

enum class Axis { fpr, sensitivity, specificity, recall, precision, fppi };

std::string_view to_string(Axis axis);
Axis axis_from_string(std::string_view name);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Points in sweep order (descending threshold). `thresholds[i]` is the score
/// cutoff that produced `points[i]`; +inf marks the "nothing predicted" start.
struct Curve {
  std::vector<CurvePoint> points;
  Axis x_axis = Axis::fpr;
  Axis y_axis = Axis::sensitivity;
  std::vector<double> thresholds;
};

enum class TieStrategy { per_prediction, grouped };

std::string_view to_string(TieStrategy ties);
TieStrategy tie_strategy_from_string(std::string_view name);

struct FppiRange {
  double lo = 0.0;
  double hi = 1.0;
  void validate() const;
};

struct RocResult {
  Curve curve;
  MetricValue auroc;
};

/// ROC by descending-score sweep, tied scores entering as one group;
/// AUROC by the trapezoidal rule. `labels` are 0/1.
RocResult roc_auroc(std::span<const double> scores, std::span<const int> labels);

/// Trapezoidal area under a piecewise-linear curve.
double trapezoid_area(const Curve& curve);

enum class PartialAucNormalization {
  none,          // raw area over [lo,hi]
  width,         // raw area / (hi - lo)
  standardized,  // McClish: 0.5 for chance, 1 for perfect
};

MetricValue partial_auroc(const Curve& roc, double lo, double hi,
                          PartialAucNormalization norm = PartialAucNormalization::width);

struct PrResult {
  Curve curve;
  MetricValue ap;
};

/// Precision-recall sweep with AP = sum_i (R_i - R_{i-1}) P_i, R_0 = 0.
/// `total_positives` lets callers count references never reached by any
/// prediction (object detection); it defaults to the number of 1-labels.
/// With per_prediction, tied predictions are taken in input order.
PrResult pr_ap(std::span<const double> scores, std::span<const int> labels,
               TieStrategy ties, std::optional<int64_t> total_positives = std::nullopt);

/// Step-sum AP over an existing PR curve (x = recall, y = precision).
MetricValue average_precision(const Curve& pr);

/// A detection with its fixed hit status, used by the classic FROC sweep.
struct ScoredHit {
  double score = 0.0;
  bool true_positive = false;
};

struct ImageHits {
  std::string image_id;
  int64_t num_refs = 0;
  std::vector<ScoredHit> hits;
};

enum class SensitivityMode { pooled, per_image_averaged };

std::string_view to_string(SensitivityMode mode);
SensitivityMode sensitivity_mode_from_string(std::string_view name);

struct FrocResult {
  Curve curve;
  MetricValue score;
};

/// FROC sweep over all images (x = mean false positives per image,
/// y = sensitivity) and the area over `range`.
FrocResult froc(std::span<const ImageHits> images, const FppiRange& range, bool normalize,
                SensitivityMode mode = SensitivityMode::pooled);

/// Area under an FROC curve using right-continuous steps: the sensitivity
/// reached at some FPPI holds until the next point.
double froc_area(const Curve& froc_curve, const FppiRange& range, bool normalize);

struct WorkingPoint {
  double value = 0.0;
  Axis value_axis = Axis::sensitivity;
  double threshold = 0.0;
};

/// Reads the curve at `target` given on `axis` (the curve's x axis, or
/// specificity for an FPR-based curve, or the curve's y axis for monotone
/// curves). Linear interpolation between bracketing points; the threshold
/// is the one of the right bracketing point. Throws RangeError outside the
/// curve's span.
WorkingPoint working_point(const Curve& curve, Axis axis, double target);

}  // namespace valmet
