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

#include "valmet/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "valmet/counting.hpp"
#include "valmet/kernels/distance.hpp"

namespace valmet {

namespace {

void check_same_shape(const LabelMap& a, const LabelMap& b) {
  if (!a.same_shape(b)) throw ShapeError("reference and prediction dimensions differ");
}

void check_same_grid(const BoundarySet& a, const BoundarySet& b) {
  if (a.width != b.width || a.height != b.height) {
    throw ShapeError("boundaries live on different grids");
  }
}

std::vector<double> directed_via_transform(const BoundarySet& from, const BoundarySet& to) {
  std::vector<uint8_t> seeds(static_cast<size_t>(to.width) * static_cast<size_t>(to.height), 0);
  for (const auto& p : to.points) seeds[static_cast<size_t>(p.y) * to.width + p.x] = 1;
  const auto dt = kernels::squared_distance_transform(seeds, to.width, to.height, to.spacing);
  std::vector<double> out(from.points.size());
  for (size_t i = 0; i < from.points.size(); ++i) {
    const auto& p = from.points[i];
    out[i] = std::sqrt(dt[static_cast<size_t>(p.y) * to.width + p.x]);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

PixelOverlap pixel_overlap(const LabelMap& ref, const LabelMap& pred, int32_t k, double beta) {
  check_same_shape(ref, pred);
  const auto a = mask_of(ref, k);
  const auto b = mask_of(pred, k);
  const auto c = kernels::overlap_counts(a.on, b.on);
  PixelOverlap out;
  out.cardinalities.tp = c.both;
  out.cardinalities.fn = c.a - c.both;
  out.cardinalities.fp = c.b - c.both;
  out.cardinalities.tn = static_cast<int64_t>(ref.size()) - c.a - c.b + c.both;
  if (c.a + c.b == 0) {
    out.dsc = out.iou = MetricValue::nan(NanReason::empty_set);
  } else {
    out.dsc = ratio(2 * c.both, c.a + c.b);
    out.iou = ratio(c.both, c.a + c.b - c.both);
  }
  out.f_beta = f_beta(out.cardinalities, beta);
  return out;
}

BoundarySet boundary_extract(const BinaryMask& mask) {
  BoundarySet b{mask.width, mask.height, mask.spacing, {}};
  auto fg = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < mask.width && y < mask.height && mask.at(x, y);
  };
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      if (!fg(x - 1, y) || !fg(x + 1, y) || !fg(x, y - 1) || !fg(x, y + 1)) {
        b.points.push_back({x, y});
      }
    }
  }
  return b;
}

BoundarySet boundary_extract(const LabelMap& mask, int32_t k) {
  return boundary_extract(mask_of(mask, k));
}

std::vector<double> directed_distances(const BoundarySet& from, const BoundarySet& to,
                                       DistanceMethod method) {
  check_same_grid(from, to);
  if (to.points.empty()) {
    return std::vector<double>(from.points.size(), std::numeric_limits<double>::infinity());
  }
  if (method == DistanceMethod::automatic) {
    method = std::max(from.points.size(), to.points.size()) <= kPairwiseBoundaryLimit
                 ? DistanceMethod::pairwise
                 : DistanceMethod::distance_transform;
  }
  if (method == DistanceMethod::distance_transform) return directed_via_transform(from, to);
  auto sq = kernels::directed_min_sqdist(from.points, to.points, to.spacing);
  for (double& d : sq) d = std::sqrt(d);
  return sq;
}

double nearest_rank_percentile(std::vector<double> values, double p) {
  if (!(p > 0.0 && p <= 100.0)) throw ParameterError("percentile must lie in (0, 100]");
  if (values.empty()) throw ParameterError("percentile of an empty list");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  // The small slack keeps exact products such as 95 * 100 / 100 from
  // rounding up to the next rank.
  auto rank = static_cast<int64_t>(std::ceil(p * n / 100.0 - 1e-9));
  rank = std::clamp<int64_t>(rank, 1, static_cast<int64_t>(values.size()));
  return values[static_cast<size_t>(rank - 1)];
}

SurfaceDistances surface_distances(const BoundarySet& ref, const BoundarySet& pred,
                                   std::optional<double> percentile, DistanceMethod method) {
  check_same_grid(ref, pred);
  if (percentile && !(*percentile > 0.0 && *percentile <= 100.0)) {
    throw ParameterError("percentile must lie in (0, 100]");
  }
  SurfaceDistances out;
  if (ref.empty() || pred.empty()) {
    out.hd = out.hd_pct = out.assd = out.masd = MetricValue::nan(NanReason::empty_set);
    return out;
  }
  const auto ab = directed_distances(ref, pred, method);
  const auto ba = directed_distances(pred, ref, method);
  out.hd = MetricValue::of(std::max(*std::max_element(ab.begin(), ab.end()),
                                    *std::max_element(ba.begin(), ba.end())));
  if (percentile) {
    out.hd_pct = MetricValue::of(std::max(nearest_rank_percentile(ab, *percentile),
                                          nearest_rank_percentile(ba, *percentile)));
  } else {
    out.hd_pct = MetricValue::nan(NanReason::undefined);
  }
  double total = 0.0;
  for (double d : ab) total += d;
  for (double d : ba) total += d;
  out.assd = MetricValue::of(total / static_cast<double>(ab.size() + ba.size()));
  out.masd = MetricValue::of(0.5 * (mean(ab) + mean(ba)));
  return out;
}

SurfaceDistances surface_distances(const LabelMap& ref, const LabelMap& pred, int32_t k,
                                   std::optional<double> percentile) {
  check_same_shape(ref, pred);
  return surface_distances(boundary_extract(ref, k), boundary_extract(pred, k), percentile);
}

MetricValue nsd(const BoundarySet& ref, const BoundarySet& pred, double tau) {
  check_same_grid(ref, pred);
  if (!(tau >= 0.0) || std::isinf(tau)) throw ParameterError("NSD tolerance must be non-negative");
  if (ref.empty() && pred.empty()) return MetricValue::nan(NanReason::empty_set);
  int64_t within = 0;
  for (double d : directed_distances(pred, ref)) within += d <= tau;
  for (double d : directed_distances(ref, pred)) within += d <= tau;
  return ratio(within, static_cast<int64_t>(ref.points.size() + pred.points.size()));
}

MetricValue nsd(const LabelMap& ref, const LabelMap& pred, int32_t k, double tau) {
  check_same_shape(ref, pred);
  return nsd(boundary_extract(ref, k), boundary_extract(pred, k), tau);
}

BinaryMask boundary_band(const BinaryMask& mask, double d) {
  BinaryMask band{mask.width, mask.height, mask.spacing,
                  std::vector<uint8_t>(mask.on.size(), 0)};
  const auto boundary = boundary_extract(mask);
  if (boundary.empty()) return band;
  std::vector<uint8_t> seeds(mask.on.size(), 0);
  for (const auto& p : boundary.points) seeds[static_cast<size_t>(p.y) * mask.width + p.x] = 1;
  const auto dt = kernels::squared_distance_transform(seeds, mask.width, mask.height, mask.spacing);
  for (size_t i = 0; i < mask.on.size(); ++i) {
    band.on[i] = (mask.on[i] && std::sqrt(dt[i]) <= d) ? 1 : 0;
  }
  return band;
}

MetricValue boundary_iou(const BinaryMask& ref, const BinaryMask& pred, double d) {
  if (ref.width != pred.width || ref.height != pred.height) {
    throw ShapeError("reference and prediction dimensions differ");
  }
  if (!(d > 0.0)) throw ParameterError("boundary IoU distance must be positive");
  const auto a = boundary_band(ref, d);
  const auto b = boundary_band(pred, d);
  const auto c = kernels::overlap_counts(a.on, b.on);
  if (c.a + c.b == 0) return MetricValue::nan(NanReason::empty_set);
  return ratio(c.both, c.a + c.b - c.both);
}

MetricValue boundary_iou(const LabelMap& ref, const LabelMap& pred, int32_t k, double d) {
  check_same_shape(ref, pred);
  return boundary_iou(mask_of(ref, k), mask_of(pred, k), d);
}

ClDice cl_dice(const BinaryMask& ref, const BinaryMask& pred) {
  if (ref.width != pred.width || ref.height != pred.height) {
    throw ShapeError("reference and prediction dimensions differ");
  }
  ClDice out;
  const auto sr = skeletonize(ref);
  const auto sp = skeletonize(pred);
  if (sr.points.empty() || sp.points.empty()) {
    out.value = out.topology_precision = out.topology_sensitivity =
        MetricValue::nan(NanReason::empty_set);
    return out;
  }
  int64_t prec_hits = 0, sens_hits = 0;
  for (const auto& p : sp.points) prec_hits += ref.at(p.x, p.y);
  for (const auto& p : sr.points) sens_hits += pred.at(p.x, p.y);
  out.topology_precision = ratio(prec_hits, static_cast<int64_t>(sp.points.size()));
  out.topology_sensitivity = ratio(sens_hits, static_cast<int64_t>(sr.points.size()));
  const double tp = out.topology_precision.value;
  const double ts = out.topology_sensitivity.value;
  out.value = tp + ts == 0.0 ? MetricValue::of(0.0) : MetricValue::of(2.0 * tp * ts / (tp + ts));
  return out;
}

ClDice cl_dice(const LabelMap& ref, const LabelMap& pred, int32_t k) {
  check_same_shape(ref, pred);
  return cl_dice(mask_of(ref, k), mask_of(pred, k));
}

VolumeError volume_error(const LabelMap& ref, const LabelMap& pred, int32_t k) {
  check_same_shape(ref, pred);
  const double cell = ref.spacing().sx * ref.spacing().sy;
  const double vr = static_cast<double>(ref.count(k)) * cell;
  const double vp = static_cast<double>(pred.count(k)) * cell;
  VolumeError out;
  out.absolute = MetricValue::of(std::abs(vp - vr));
  out.relative = ratio(vp - vr, vr);
  return out;
}

}  // namespace valmet
