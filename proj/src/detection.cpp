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

#include "valmet/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "valmet/counting.hpp"
#include "valmet/hungarian.hpp"
#include "valmet/kernels/parallel.hpp"
#include "valmet/segmentation.hpp"

namespace valmet {

// ---------------------------------------------------------------------------
// Geometry

void Box::validate() const {
  if (!(x1 > x0) || !(y1 > y0)) throw ParameterError("box needs x1 > x0 and y1 > y0");
}

Region::Region(int width, int height, std::vector<int64_t> pixels, Spacing spacing)
    : width_(width), height_(height), pixels_(std::move(pixels)), spacing_(spacing) {
  if (width <= 0 || height <= 0) throw ParameterError("region grid must be non-empty");
  std::sort(pixels_.begin(), pixels_.end());
  pixels_.erase(std::unique(pixels_.begin(), pixels_.end()), pixels_.end());
  if (pixels_.empty()) throw ParameterError("region has no pixels");
  if (pixels_.front() < 0 || pixels_.back() >= static_cast<int64_t>(width) * height) {
    throw ParameterError("region pixel outside its grid");
  }
}

std::shared_ptr<const Region> Region::from_label(const LabelMap& map, int32_t id) {
  std::vector<int64_t> px;
  for (size_t i = 0; i < map.size(); ++i) {
    if (map.data()[i] == id) px.push_back(static_cast<int64_t>(i));
  }
  if (px.empty()) throw ParameterError("instance id " + std::to_string(id) + " not present");
  return std::make_shared<const Region>(map.width(), map.height(), std::move(px), map.spacing());
}

bool Region::contains(Point2 p) const {
  const double fx = std::floor(p.x), fy = std::floor(p.y);
  if (fx < 0 || fy < 0 || fx >= width_ || fy >= height_) return false;
  const int64_t idx = static_cast<int64_t>(fy) * width_ + static_cast<int64_t>(fx);
  return std::binary_search(pixels_.begin(), pixels_.end(), idx);
}

Point2 Region::centroid() const {
  double sx = 0.0, sy = 0.0;
  for (int64_t i : pixels_) {
    sx += static_cast<double>(i % width_) + 0.5;
    sy += static_cast<double>(i / width_) + 0.5;
  }
  const double n = static_cast<double>(pixels_.size());
  return {sx / n, sy / n};
}

Box Region::bounding_box() const {
  int64_t minx = width_, maxx = -1, miny = height_, maxy = -1;
  for (int64_t i : pixels_) {
    const int64_t x = i % width_, y = i / width_;
    minx = std::min(minx, x);
    maxx = std::max(maxx, x);
    miny = std::min(miny, y);
    maxy = std::max(maxy, y);
  }
  return {static_cast<double>(minx), static_cast<double>(miny), static_cast<double>(maxx + 1),
          static_cast<double>(maxy + 1)};
}

BinaryMask Region::to_mask() const {
  BinaryMask m{width_, height_, spacing_,
               std::vector<uint8_t>(static_cast<size_t>(width_) * height_, 0)};
  for (int64_t i : pixels_) m.on[static_cast<size_t>(i)] = 1;
  return m;
}

int64_t Region::intersection(const Region& other) const {
  if (width_ != other.width_ || height_ != other.height_) {
    throw ShapeError("regions live on different grids");
  }
  int64_t n = 0;
  auto a = pixels_.begin();
  auto b = other.pixels_.begin();
  while (a != pixels_.end() && b != other.pixels_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++n;
      ++a;
      ++b;
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// Localization

namespace {

const Region* region_of(const Geometry& g) {
  if (auto* r = std::get_if<std::shared_ptr<const Region>>(&g)) return r->get();
  return nullptr;
}

std::optional<Box> box_of(const Geometry& g) {
  if (auto* b = std::get_if<Box>(&g)) return *b;
  if (auto* r = region_of(g)) return r->bounding_box();
  return std::nullopt;
}

Point2 center_of(const Geometry& g) {
  if (auto* b = std::get_if<Box>(&g)) return b->center();
  if (auto* r = region_of(g)) return r->centroid();
  return std::get<Point2>(g);
}

bool covers(const Geometry& g, Point2 p) {
  if (auto* b = std::get_if<Box>(&g)) return b->contains(p);
  if (auto* r = region_of(g)) return r->contains(p);
  throw ParameterError("a point cannot contain another point");
}

double box_intersection(const Box& a, const Box& b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

const Region& require_region(const Geometry& g, std::string_view kind) {
  const Region* r = region_of(g);
  if (!r) throw ParameterError(std::string(kind) + " needs mask geometry");
  return *r;
}

}  // namespace

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::box_iou: return "box_iou";
    case CriterionKind::mask_iou: return "mask_iou";
    case CriterionKind::mask_iou_gt0: return "mask_iou_gt0";
    case CriterionKind::boundary_iou: return "boundary_iou";
    case CriterionKind::ior: return "ior";
    case CriterionKind::center_distance: return "center_distance";
    case CriterionKind::point_inside: return "point_inside";
    case CriterionKind::center_cover: return "center_cover";
    case CriterionKind::center_hit: return "center_hit";
  }
  return "box_iou";
}

CriterionKind criterion_kind_from_string(std::string_view name) {
  for (auto k : {CriterionKind::box_iou, CriterionKind::mask_iou, CriterionKind::mask_iou_gt0,
                 CriterionKind::boundary_iou, CriterionKind::ior, CriterionKind::center_distance,
                 CriterionKind::point_inside, CriterionKind::center_cover,
                 CriterionKind::center_hit}) {
    if (to_string(k) == name) return k;
  }
  throw ParameterError("unknown localization criterion '" + std::string(name) + "'");
}

void LocalizationCriterion::validate() const {
  switch (kind) {
    case CriterionKind::center_distance:
      if (!(cutoff >= 0.0) || std::isinf(cutoff)) throw ParameterError("distance cutoff must be >= 0");
      break;
    case CriterionKind::point_inside:
    case CriterionKind::center_cover:
    case CriterionKind::center_hit:
      if (!(cutoff > 0.0 && cutoff <= 1.0)) throw ParameterError("containment cutoff must lie in (0,1]");
      break;
    case CriterionKind::boundary_iou:
      if (!(boundary_d > 0.0)) throw ParameterError("boundary IoU distance must be positive");
      [[fallthrough]];
    default:
      if (!(cutoff >= 0.0 && cutoff <= 1.0)) throw ParameterError("IoU-type cutoff must lie in [0,1]");
  }
}

Localization localize(const DetectionObject& pred, const DetectionObject& ref,
                      const LocalizationCriterion& crit) {
  crit.validate();
  double score = 0.0;
  const auto kind_name = to_string(crit.kind);
  switch (crit.kind) {
    case CriterionKind::box_iou: {
      const auto a = box_of(pred.geometry);
      const auto b = box_of(ref.geometry);
      if (!a || !b) throw ParameterError("box_iou needs box or mask geometry");
      a->validate();
      b->validate();
      const double inter = box_intersection(*a, *b);
      score = inter / (a->area() + b->area() - inter);
      break;
    }
    case CriterionKind::mask_iou:
    case CriterionKind::mask_iou_gt0: {
      const auto& a = require_region(pred.geometry, kind_name);
      const auto& b = require_region(ref.geometry, kind_name);
      const double inter = static_cast<double>(a.intersection(b));
      score = inter / (static_cast<double>(a.area() + b.area()) - inter);
      break;
    }
    case CriterionKind::boundary_iou: {
      const auto& a = require_region(pred.geometry, kind_name);
      const auto& b = require_region(ref.geometry, kind_name);
      const auto v = boundary_iou(b.to_mask(), a.to_mask(), crit.boundary_d);
      score = v ? v.value : 0.0;
      break;
    }
    case CriterionKind::ior: {
      if (region_of(pred.geometry) && region_of(ref.geometry)) {
        const auto& a = *region_of(pred.geometry);
        const auto& b = *region_of(ref.geometry);
        score = static_cast<double>(a.intersection(b)) / static_cast<double>(b.area());
      } else {
        const auto a = box_of(pred.geometry);
        const auto b = box_of(ref.geometry);
        if (!a || !b) throw ParameterError("ior needs box or mask geometry");
        a->validate();
        b->validate();
        score = box_intersection(*a, *b) / b->area();
      }
      break;
    }
    case CriterionKind::center_distance: {
      const Point2 a = center_of(pred.geometry);
      const Point2 b = center_of(ref.geometry);
      score = std::hypot(a.x - b.x, a.y - b.y);
      break;
    }
    case CriterionKind::point_inside: {
      const auto* p = std::get_if<Point2>(&pred.geometry);
      if (!p) throw ParameterError("point_inside needs a point prediction");
      score = covers(ref.geometry, *p) ? 1.0 : 0.0;
      break;
    }
    case CriterionKind::center_cover:
      score = covers(pred.geometry, center_of(ref.geometry)) ? 1.0 : 0.0;
      break;
    case CriterionKind::center_hit:
      score = covers(ref.geometry, center_of(pred.geometry)) ? 1.0 : 0.0;
      break;
  }
  bool hit;
  if (crit.kind == CriterionKind::center_distance) {
    hit = score <= crit.cutoff;
  } else if (crit.kind == CriterionKind::mask_iou_gt0) {
    hit = score > 0.0;
  } else {
    hit = score >= crit.cutoff;
  }
  return {score, hit};
}

// ---------------------------------------------------------------------------
// Assignment

std::string_view to_string(AssignmentStrategy s) {
  switch (s) {
    case AssignmentStrategy::greedy_by_score: return "greedy_by_score";
    case AssignmentStrategy::greedy_by_criterion: return "greedy_by_criterion";
    case AssignmentStrategy::hungarian: return "hungarian";
    case AssignmentStrategy::overlap_gt_half: return "overlap_gt_half";
  }
  return "greedy_by_score";
}

AssignmentStrategy assignment_strategy_from_string(std::string_view name) {
  for (auto s : {AssignmentStrategy::greedy_by_score, AssignmentStrategy::greedy_by_criterion,
                 AssignmentStrategy::hungarian, AssignmentStrategy::overlap_gt_half}) {
    if (to_string(s) == name) return s;
  }
  throw ParameterError("unknown assignment strategy '" + std::string(name) + "'");
}

namespace {

struct Candidate {
  size_t pred;
  size_t ref;
  double value;
};

// Greedy over candidates in the given order; each side used at most once.
void take_greedily(const std::vector<Candidate>& ordered, std::vector<int>& pred_to_ref,
                   std::vector<char>& ref_used, std::vector<double>& values) {
  for (const auto& c : ordered) {
    if (pred_to_ref[c.pred] >= 0 || ref_used[c.ref]) continue;
    pred_to_ref[c.pred] = static_cast<int>(c.ref);
    ref_used[c.ref] = 1;
    values[c.pred] = c.value;
  }
}

}  // namespace

MatchResult assign(std::span<const DetectionObject> preds, std::span<const DetectionObject> refs,
                   const LocalizationCriterion& crit, AssignmentStrategy strategy) {
  crit.validate();
  const size_t np = preds.size(), nr = refs.size();
  std::vector<std::vector<std::optional<double>>> feasible(np, std::vector<std::optional<double>>(nr));
  for (size_t i = 0; i < np; ++i) {
    for (size_t j = 0; j < nr; ++j) {
      if (preds[i].class_id != refs[j].class_id) continue;
      const auto loc = localize(preds[i], refs[j], crit);
      if (loc.hit) feasible[i][j] = loc.score;
    }
  }
  const bool sim = crit.similarity();
  auto better = [&](double a, double b) { return sim ? a > b : a < b; };

  std::vector<int> pred_to_ref(np, -1);
  std::vector<char> ref_used(nr, 0);
  std::vector<double> values(np, 0.0);

  switch (strategy) {
    case AssignmentStrategy::greedy_by_score: {
      for (const auto& p : preds) {
        if (!p.score) throw ParameterError("greedy_by_score needs prediction scores");
      }
      std::vector<size_t> order(np);
      for (size_t i = 0; i < np; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (*preds[a].score != *preds[b].score) return *preds[a].score > *preds[b].score;
        return preds[a].id < preds[b].id;
      });
      std::vector<size_t> ref_order(nr);
      for (size_t j = 0; j < nr; ++j) ref_order[j] = j;
      std::sort(ref_order.begin(), ref_order.end(),
                [&](size_t a, size_t b) { return refs[a].id < refs[b].id; });
      for (size_t i : order) {
        int best = -1;
        for (size_t j : ref_order) {
          if (ref_used[j] || !feasible[i][j]) continue;
          if (best < 0 || better(*feasible[i][j], *feasible[i][static_cast<size_t>(best)])) {
            best = static_cast<int>(j);
          }
        }
        if (best >= 0) {
          pred_to_ref[i] = best;
          ref_used[static_cast<size_t>(best)] = 1;
          values[i] = *feasible[i][static_cast<size_t>(best)];
        }
      }
      break;
    }
    case AssignmentStrategy::greedy_by_criterion:
    case AssignmentStrategy::overlap_gt_half: {
      if (strategy == AssignmentStrategy::overlap_gt_half &&
          !(crit.kind == CriterionKind::box_iou || crit.kind == CriterionKind::mask_iou ||
            crit.kind == CriterionKind::mask_iou_gt0 || crit.kind == CriterionKind::boundary_iou)) {
        throw ParameterError("overlap_gt_half needs an IoU-type criterion");
      }
      std::vector<Candidate> cands;
      for (size_t i = 0; i < np; ++i) {
        for (size_t j = 0; j < nr; ++j) {
          if (!feasible[i][j]) continue;
          if (strategy == AssignmentStrategy::overlap_gt_half && !(*feasible[i][j] > 0.5)) continue;
          cands.push_back({i, j, *feasible[i][j]});
        }
      }
      std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.value != b.value) return better(a.value, b.value);
        return std::tie(preds[a.pred].id, refs[a.ref].id) < std::tie(preds[b.pred].id, refs[b.ref].id);
      });
      take_greedily(cands, pred_to_ref, ref_used, values);
      break;
    }
    case AssignmentStrategy::hungarian: {
      if (np == 0 || nr == 0) break;
      double max_cost = 0.0;
      std::vector<double> cost(np * nr, 0.0);
      for (size_t i = 0; i < np; ++i) {
        for (size_t j = 0; j < nr; ++j) {
          if (!feasible[i][j]) continue;
          cost[i * nr + j] = sim ? 1.0 - *feasible[i][j] : *feasible[i][j];
          max_cost = std::max(max_cost, cost[i * nr + j]);
        }
      }
      // Forbidden pairs cost more than any feasible matching, so the solver
      // first maximises the number of feasible pairs.
      const double forbidden = (max_cost + 1.0) * static_cast<double>(std::min(np, nr) + 1);
      for (size_t i = 0; i < np; ++i)
        for (size_t j = 0; j < nr; ++j)
          if (!feasible[i][j]) cost[i * nr + j] = forbidden;
      const auto sol = solve_assignment(cost, static_cast<int>(np), static_cast<int>(nr));
      for (size_t i = 0; i < np; ++i) {
        const int j = sol.row_to_col[i];
        if (j < 0 || !feasible[i][static_cast<size_t>(j)]) continue;
        pred_to_ref[i] = j;
        ref_used[static_cast<size_t>(j)] = 1;
        values[i] = *feasible[i][static_cast<size_t>(j)];
      }
      break;
    }
  }

  MatchResult result;
  for (size_t i = 0; i < np; ++i) {
    if (pred_to_ref[i] >= 0) {
      result.pairs.push_back({preds[i].id, refs[static_cast<size_t>(pred_to_ref[i])].id, values[i]});
    } else {
      result.unmatched_preds.push_back(preds[i].id);
    }
  }
  for (size_t j = 0; j < nr; ++j) {
    if (!ref_used[j]) result.unmatched_refs.push_back(refs[j].id);
  }
  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const MatchPair& a, const MatchPair& b) { return a.pred_id < b.pred_id; });
  std::sort(result.unmatched_preds.begin(), result.unmatched_preds.end());
  std::sort(result.unmatched_refs.begin(), result.unmatched_refs.end());
  return result;
}

// ---------------------------------------------------------------------------
// Per-image counting and curves

std::string_view to_string(CountingMetric m) {
  switch (m) {
    case CountingMetric::sensitivity: return "sensitivity";
    case CountingMetric::ppv: return "ppv";
    case CountingMetric::f_beta: return "f_beta";
  }
  return "sensitivity";
}

PerImageCounting per_image_counting(std::span<const ImageCounts> images, CountingMetric metric,
                                    double beta, MissingPolicy policy) {
  PerImageCounting out;
  std::string context;
  for (const auto& im : images) {
    const BinaryConfusion cm{im.tp, im.fn, im.fp, 0};
    MetricValue v;
    switch (metric) {
      case CountingMetric::sensitivity: v = sensitivity(cm); break;
      case CountingMetric::ppv: v = ppv(cm); break;
      case CountingMetric::f_beta: v = f_beta(cm, beta); break;
    }
    if (!v) {
      if (!context.empty()) context += ", ";
      context += "image '" + im.image_id + "'";
    }
    out.per_image.push_back(v);
  }
  out.value = reduce_values(out.per_image, AggregateOperator::mean, policy, to_string(metric), context);
  return out;
}

DatasetCurves dataset_curves(std::span<const ImageObjects> images,
                             const LocalizationCriterion& crit, AssignmentStrategy strategy,
                             SensitivityMode mode, const FppiRange& range, bool normalize_froc) {
  range.validate();
  std::set<double, std::greater<>> thresholds;
  int64_t total_refs = 0;
  for (const auto& im : images) {
    total_refs += static_cast<int64_t>(im.refs.size());
    for (const auto& p : im.preds) {
      if (!p.score) {
        throw ParameterError("prediction " + std::to_string(p.id) + " in image '" + im.image_id +
                             "' has no score; curve metrics need predicted class scores");
      }
      thresholds.insert(*p.score);
    }
  }
  DatasetCurves out;
  out.pr.x_axis = Axis::recall;
  out.pr.y_axis = Axis::precision;
  out.froc.x_axis = Axis::fppi;
  out.froc.y_axis = Axis::sensitivity;
  if (images.empty() || total_refs == 0) {
    out.ap = out.froc_score = MetricValue::nan(NanReason::empty_set);
    return out;
  }

  const double n_images = static_cast<double>(images.size());
  out.froc.points.push_back({0.0, 0.0});
  out.froc.thresholds.push_back(std::numeric_limits<double>::infinity());
  std::vector<ImageCounts> counts(images.size());
  for (double t : thresholds) {
    kernels::parallel_for(static_cast<int64_t>(images.size()), [&](int64_t i) {
      const auto& im = images[static_cast<size_t>(i)];
      std::vector<DetectionObject> kept;
      for (const auto& p : im.preds) {
        if (*p.score >= t) kept.push_back(p);
      }
      const auto m = assign(kept, im.refs, crit, strategy);
      counts[static_cast<size_t>(i)] = {im.image_id, m.tp(), m.fp(), m.fn()};
    });
    int64_t tp = 0, fp = 0;
    double recall_sum = 0.0, precision_sum = 0.0;
    int64_t recall_n = 0, precision_n = 0;
    for (const auto& c : counts) {
      tp += c.tp;
      fp += c.fp;
      if (c.tp + c.fn > 0) {
        recall_sum += static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
        ++recall_n;
      }
      if (c.tp + c.fp > 0) {
        precision_sum += static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
        ++precision_n;
      }
    }
    double recall, precision;
    if (mode == SensitivityMode::pooled) {
      recall = static_cast<double>(tp) / static_cast<double>(total_refs);
      precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp)
                              : std::numeric_limits<double>::quiet_NaN();
    } else {
      recall = recall_sum / static_cast<double>(recall_n);
      precision = precision_n > 0 ? precision_sum / static_cast<double>(precision_n)
                                  : std::numeric_limits<double>::quiet_NaN();
    }
    out.pr.points.push_back({recall, precision});
    out.pr.thresholds.push_back(t);
    out.froc.points.push_back({static_cast<double>(fp) / n_images, recall});
    out.froc.thresholds.push_back(t);
  }
  out.ap = average_precision(out.pr);
  out.froc_score = MetricValue::of(froc_area(out.froc, range, normalize_froc));
  return out;
}

// ---------------------------------------------------------------------------
// Panoptic quality

std::string_view to_string(PanopticMode m) { return m == PanopticMode::strict ? "strict" : "loose"; }

PanopticResult panoptic_quality(std::span<const InstanceMask> refs,
                                std::span<const InstanceMask> preds, PanopticMode mode) {
  for (auto list : {refs, preds}) {
    std::set<int> ids;
    for (const auto& inst : list) {
      if (!inst.region) throw ParameterError("instance " + std::to_string(inst.id) + " has no mask");
      if (!ids.insert(inst.id).second) {
        throw ParameterError("instance id " + std::to_string(inst.id) + " is not unique");
      }
    }
  }
  struct Pair {
    size_t r, p;
    double iou;
  };
  std::vector<Pair> pairs;
  for (size_t i = 0; i < refs.size(); ++i) {
    for (size_t j = 0; j < preds.size(); ++j) {
      const double inter = static_cast<double>(refs[i].region->intersection(*preds[j].region));
      if (inter == 0.0) continue;
      const double iou =
          inter / (static_cast<double>(refs[i].region->area() + preds[j].region->area()) - inter);
      if (mode == PanopticMode::strict && !(iou > 0.5)) continue;
      pairs.push_back({i, j, iou});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    return std::tie(preds[a.p].id, refs[a.r].id) < std::tie(preds[b.p].id, refs[b.r].id);
  });
  std::vector<char> ref_used(refs.size(), 0), pred_used(preds.size(), 0);
  PanopticResult out;
  double iou_sum = 0.0;
  for (const auto& pr : pairs) {
    if (ref_used[pr.r] || pred_used[pr.p]) continue;
    ref_used[pr.r] = pred_used[pr.p] = 1;
    out.matches.push_back({preds[pr.p].id, refs[pr.r].id, pr.iou});
  }
  std::sort(out.matches.begin(), out.matches.end(),
            [](const MatchPair& a, const MatchPair& b) { return a.pred_id < b.pred_id; });
  for (const auto& m : out.matches) iou_sum += m.value;
  out.tp = static_cast<int64_t>(out.matches.size());
  out.fp = static_cast<int64_t>(preds.size()) - out.tp;
  out.fn = static_cast<int64_t>(refs.size()) - out.tp;
  const double den = static_cast<double>(out.tp) + 0.5 * static_cast<double>(out.fp) +
                     0.5 * static_cast<double>(out.fn);
  if (den == 0.0) {
    out.pq = out.sq = out.dq = MetricValue::nan(NanReason::empty_set);
    return out;
  }
  out.sq = ratio(iou_sum, static_cast<double>(out.tp));
  out.dq = MetricValue::of(static_cast<double>(out.tp) / den);
  out.pq = MetricValue::of(iou_sum / den);
  return out;
}

PanopticResult panoptic_quality(const LabelMap& ref_instances, const LabelMap& pred_instances,
                                PanopticMode mode) {
  if (!ref_instances.same_shape(pred_instances)) {
    throw ShapeError("reference and prediction dimensions differ");
  }
  auto instances = [](const LabelMap& map) {
    std::vector<InstanceMask> out;
    for (int32_t id : map.labels()) out.push_back({id, Region::from_label(map, id)});
    return out;
  };
  const auto r = instances(ref_instances);
  const auto p = instances(pred_instances);
  return panoptic_quality(r, p, mode);
}

}  // namespace valmet
