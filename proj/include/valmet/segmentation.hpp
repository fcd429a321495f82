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
#include <vector>

#include "valmet/confusion.hpp"
#include "valmet/label_map.hpp"
#include "valmet/metric_value.hpp"

namespace valmet {

/// Boundary pixels of one structure, sorted row-major, with the grid they
/// live on.
struct BoundarySet {
  int width = 0;
  int height = 0;
  Spacing spacing;
  std::vector<Pixel> points;

  bool empty() const { return points.empty(); }
};

/// Pixels kept by thinning; a subset of the source foreground.
struct Skeleton {
  int width = 0;
  int height = 0;
  std::vector<Pixel> points;
};

struct PixelOverlap {
  BinaryConfusion cardinalities;  // tn counts background-background pixels
  MetricValue dsc;
  MetricValue iou;
  MetricValue f_beta;
};

PixelOverlap pixel_overlap(const LabelMap& ref, const LabelMap& pred, int32_t k,
                           double beta = 1.0);

/// Class-k pixels with at least one 4-neighbour outside class k; the image
/// border counts as background.
BoundarySet boundary_extract(const LabelMap& mask, int32_t k);
BoundarySet boundary_extract(const BinaryMask& mask);

/// Largest boundary for which distances are computed by exhaustive pairwise
/// search; above it a grid distance transform is used.
inline constexpr size_t kPairwiseBoundaryLimit = 4096;

enum class DistanceMethod { automatic, pairwise, distance_transform };

/// Distances from every point of `from` to the nearest point of `to`.
std::vector<double> directed_distances(const BoundarySet& from, const BoundarySet& to,
                                       DistanceMethod method = DistanceMethod::automatic);

struct SurfaceDistances {
  MetricValue hd;
  MetricValue hd_pct;  // NaN(undefined) when no percentile was requested
  MetricValue assd;
  MetricValue masd;
};

/// Nearest-rank percentile of an unsorted list, p in (0, 100].
double nearest_rank_percentile(std::vector<double> values, double p);

SurfaceDistances surface_distances(const BoundarySet& ref, const BoundarySet& pred,
                                   std::optional<double> percentile = std::nullopt,
                                   DistanceMethod method = DistanceMethod::automatic);
SurfaceDistances surface_distances(const LabelMap& ref, const LabelMap& pred, int32_t k,
                                   std::optional<double> percentile = std::nullopt);

/// Normalized surface distance at tolerance tau.
MetricValue nsd(const BoundarySet& ref, const BoundarySet& pred, double tau);
MetricValue nsd(const LabelMap& ref, const LabelMap& pred, int32_t k, double tau);

/// Mask pixels whose distance to the mask's own boundary is at most d.
BinaryMask boundary_band(const BinaryMask& mask, double d);
MetricValue boundary_iou(const BinaryMask& ref, const BinaryMask& pred, double d);
MetricValue boundary_iou(const LabelMap& ref, const LabelMap& pred, int32_t k, double d);

/// Iterative Zhang-Suen thinning. Each sub-iteration deletes in place in
/// row-major order, so results are reproducible and 2-pixel-thick
/// structures never vanish completely.
Skeleton skeletonize(const BinaryMask& mask);

struct ClDice {
  MetricValue value;
  MetricValue topology_precision;
  MetricValue topology_sensitivity;
};

ClDice cl_dice(const BinaryMask& ref, const BinaryMask& pred);
ClDice cl_dice(const LabelMap& ref, const LabelMap& pred, int32_t k);

struct VolumeError {
  MetricValue absolute;
  MetricValue relative;  // (Vp - Vr) / Vr
};

VolumeError volume_error(const LabelMap& ref, const LabelMap& pred, int32_t k);

}  // namespace valmet
