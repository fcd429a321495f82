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

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "valmet/aggregation.hpp"
#include "valmet/curves.hpp"
#include "valmet/label_map.hpp"
#include "valmet/metric_value.hpp"

namespace valmet {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Half-open box [x0, x1) x [y0, y1).
struct Box {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  void validate() const;
  double area() const { return (x1 - x0) * (y1 - y0); }
  Point2 center() const { return {(x0 + x1) / 2.0, (y0 + y1) / 2.0}; }
  bool contains(Point2 p) const { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }
};

/// A pixel mask of one object: sorted linear pixel indices on a grid.
/// Pixel (x, y) covers [x, x+1) x [y, y+1).
class Region {
 public:
  Region(int width, int height, std::vector<int64_t> pixels, Spacing spacing = {});
  static std::shared_ptr<const Region> from_label(const LabelMap& map, int32_t id);

  int width() const { return width_; }
  int height() const { return height_; }
  const Spacing& spacing() const { return spacing_; }
  const std::vector<int64_t>& pixels() const { return pixels_; }
  int64_t area() const { return static_cast<int64_t>(pixels_.size()); }
  bool contains(Point2 p) const;
  Point2 centroid() const;
  Box bounding_box() const;
  BinaryMask to_mask() const;
  int64_t intersection(const Region& other) const;

 private:
  int width_;
  int height_;
  std::vector<int64_t> pixels_;
  Spacing spacing_;
};

using Geometry = std::variant<Box, std::shared_ptr<const Region>, Point2>;

struct DetectionObject {
  int id = 0;
  std::string image_id;
  int class_id = 1;
  Geometry geometry;
  std::optional<double> score;
};

enum class CriterionKind {
  box_iou,
  mask_iou,
  mask_iou_gt0,
  boundary_iou,
  ior,
  center_distance,
  point_inside,
  center_cover,
  center_hit,
};

std::string_view to_string(CriterionKind kind);
CriterionKind criterion_kind_from_string(std::string_view name);

struct LocalizationCriterion {
  CriterionKind kind = CriterionKind::box_iou;
  double cutoff = 0.5;
  double boundary_d = 1.0;  // band width for boundary_iou

  void validate() const;
  /// Larger score is better for every kind except center_distance.
  bool similarity() const { return kind != CriterionKind::center_distance; }
};

struct Localization {
  double score = 0.0;
  bool hit = false;
};

/// Throws ParameterError when the geometries do not fit the criterion.
Localization localize(const DetectionObject& pred, const DetectionObject& ref,
                      const LocalizationCriterion& crit);

enum class AssignmentStrategy { greedy_by_score, greedy_by_criterion, hungarian, overlap_gt_half };

std::string_view to_string(AssignmentStrategy s);
AssignmentStrategy assignment_strategy_from_string(std::string_view name);

struct MatchPair {
  int pred_id = 0;
  int ref_id = 0;
  double value = 0.0;
};

struct MatchResult {
  std::vector<MatchPair> pairs;  // sorted by pred id
  std::vector<int> unmatched_preds;
  std::vector<int> unmatched_refs;

  int64_t tp() const { return static_cast<int64_t>(pairs.size()); }
  int64_t fp() const { return static_cast<int64_t>(unmatched_preds.size()); }
  int64_t fn() const { return static_cast<int64_t>(unmatched_refs.size()); }
};

/// One-to-one matching of one image's predictions to its references. Pairs
/// of different classes or failing the cutoff are never matched.
MatchResult assign(std::span<const DetectionObject> preds, std::span<const DetectionObject> refs,
                   const LocalizationCriterion& crit, AssignmentStrategy strategy);

enum class CountingMetric { sensitivity, ppv, f_beta };

std::string_view to_string(CountingMetric m);

struct ImageCounts {
  std::string image_id;
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
};

struct PerImageCounting {
  MetricValue value;                 // dataset value
  std::vector<MetricValue> per_image;
};

/// Metric per image from its TP/FP/FN, then averaged under `policy`.
PerImageCounting per_image_counting(std::span<const ImageCounts> images, CountingMetric metric,
                                    double beta = 1.0,
                                    MissingPolicy policy = MissingPolicy::ignore);

/// References and predictions of one image.
struct ImageObjects {
  std::string image_id;
  std::vector<DetectionObject> refs;
  std::vector<DetectionObject> preds;
};

struct DatasetCurves {
  Curve pr;
  MetricValue ap;
  Curve froc;
  MetricValue froc_score;
};

/// Threshold sweep over the union of prediction scores (descending). At each
/// threshold the retained predictions are re-assigned from scratch.
/// `pooled` sums cardinalities over the dataset; `per_image_averaged`
/// averages per-image precision/recall, skipping undefined images.
/// Throws ParameterError when any prediction lacks a score.
DatasetCurves dataset_curves(std::span<const ImageObjects> images,
                             const LocalizationCriterion& crit, AssignmentStrategy strategy,
                             SensitivityMode mode, const FppiRange& range, bool normalize_froc);

enum class PanopticMode { strict, loose };

std::string_view to_string(PanopticMode m);

struct InstanceMask {
  int id = 0;
  std::shared_ptr<const Region> region;
};

struct PanopticResult {
  MetricValue pq;
  MetricValue sq;
  MetricValue dq;
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
  std::vector<MatchPair> matches;
};

/// strict: matches need IoU > 0.5; loose: any overlap, greedy by IoU.
PanopticResult panoptic_quality(std::span<const InstanceMask> refs,
                                std::span<const InstanceMask> preds, PanopticMode mode);
/// Instances are the distinct non-zero ids of each map.
PanopticResult panoptic_quality(const LabelMap& ref_instances, const LabelMap& pred_instances,
                                PanopticMode mode);

}  // namespace valmet
