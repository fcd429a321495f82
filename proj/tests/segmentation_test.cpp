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
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace valmet {
namespace {

// Boundary by direct neighbour scan, independent of boundary_extract.
std::vector<Pixel> rim(const LabelMap& m, int32_t k) {
  std::vector<Pixel> out;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (m.at(x, y) != k) continue;
      const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
      bool edge = false;
      for (int i = 0; i < 4; ++i) {
        const int nx = x + dx[i], ny = y + dy[i];
        if (!m.contains(nx, ny) || m.at(nx, ny) != k) edge = true;
      }
      if (edge) out.push_back({x, y});
    }
  }
  return out;
}

std::vector<double> nearest(const std::vector<Pixel>& from, const std::vector<Pixel>& to, Spacing s) {
  std::vector<double> out;
  for (const Pixel& a : from) {
    double best = INFINITY;
    for (const Pixel& b : to) {
      best = std::min(best, std::hypot((a.x - b.x) * s.sx, (a.y - b.y) * s.sy));
    }
    out.push_back(best);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double d : v) s += d;
  return s / static_cast<double>(v.size());
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

LabelMap square(int w, int h, int x0, int y0, int side, int32_t k = 1) {
  LabelMap m(w, h);
  for (int y = y0; y < y0 + side; ++y) {
    for (int x = x0; x < x0 + side; ++x) m.set(x, y, k);
  }
  return m;
}

BoundarySet boundary_of(int w, int h, std::vector<Pixel> pts) {
  std::sort(pts.begin(), pts.end());
  return {w, h, {}, std::move(pts)};
}

TEST(PixelOverlapTest, Examples) {
  const LabelMap a = square(4, 4, 0, 0, 2);
  const PixelOverlap same = pixel_overlap(a, a, 1);
  EXPECT_EQ(same.dsc.value, 1.0);
  EXPECT_EQ(same.iou.value, 1.0);

  const LabelMap b = square(4, 4, 1, 0, 2);
  const PixelOverlap half = pixel_overlap(a, b, 1);
  EXPECT_EQ(half.dsc.value, 0.5);
  EXPECT_DOUBLE_EQ(half.iou.value, 1.0 / 3.0);
  EXPECT_EQ(half.cardinalities, (BinaryConfusion{2, 2, 2, 10}));

  const LabelMap far = square(4, 4, 2, 2, 2);
  EXPECT_EQ(pixel_overlap(a, far, 1).dsc.value, 0.0);
  EXPECT_EQ(volume_error(a, far, 1).absolute.value, 0.0);

  const LabelMap empty(4, 4);
  EXPECT_EQ(*pixel_overlap(empty, empty, 1).dsc.nan_reason, NanReason::empty_set);
  EXPECT_THROW(pixel_overlap(a, LabelMap(3, 4), 1), ShapeError);
}

TEST(BoundaryTest, Examples) {
  EXPECT_EQ(boundary_extract(square(3, 3, 1, 1, 1), 1).points, (std::vector<Pixel>{{1, 1}}));
  EXPECT_EQ(boundary_extract(square(5, 5, 1, 1, 3), 1).points.size(), 8u);
  EXPECT_TRUE(boundary_extract(LabelMap(3, 3), 1).empty());
  // Image border counts as background.
  EXPECT_EQ(boundary_extract(LabelMap(3, 3, 1), 1).points.size(), 8u);
}

TEST(BoundaryTest, MatchesNeighbourScan) {
  testing::Gen gen(41);
  for (int trial = 0; trial < 100; ++trial) {
    const LabelMap m = gen.mask(gen.uniform_int(1, 12), gen.uniform_int(1, 12), 0.5);
    EXPECT_EQ(boundary_extract(m, 1).points, rim(m, 1));
  }
}

TEST(SurfaceDistanceTest, Examples) {
  const SurfaceDistances d = surface_distances(boundary_of(5, 5, {{0, 0}}), boundary_of(5, 5, {{3, 4}}));
  EXPECT_EQ(d.hd.value, 5.0);
  EXPECT_EQ(d.assd.value, 5.0);
  EXPECT_EQ(d.masd.value, 5.0);

  const LabelMap a = square(8, 8, 2, 2, 3);
  const SurfaceDistances same = surface_distances(a, a, 1, 95.0);
  EXPECT_EQ(same.hd.value, 0.0);
  EXPECT_EQ(same.hd_pct.value, 0.0);
  EXPECT_EQ(same.assd.value, 0.0);

  EXPECT_EQ(*surface_distances(a, LabelMap(8, 8), 1).hd.nan_reason, NanReason::empty_set);
}

TEST(SurfaceDistanceTest, PercentileIgnoresSingleOutlier) {
  std::vector<Pixel> ref, pred;
  for (int x = 0; x <= 100; ++x) ref.push_back({x, 0});
  pred = ref;
  pred.push_back({0, 10});
  const SurfaceDistances d =
      surface_distances(boundary_of(101, 11, ref), boundary_of(101, 11, pred), 95.0);
  EXPECT_EQ(d.hd.value, 10.0);
  EXPECT_EQ(d.hd_pct.value, 0.0);
}

TEST(SurfaceDistanceTest, NearestRankPercentile) {
  EXPECT_EQ(nearest_rank_percentile({4, 1, 3, 2}, 50), 2.0);
  EXPECT_EQ(nearest_rank_percentile({4, 1, 3, 2}, 100), 4.0);
  EXPECT_EQ(nearest_rank_percentile({5}, 1), 5.0);
  EXPECT_THROW(nearest_rank_percentile({1, 2}, 0), ParameterError);
}

TEST(SurfaceDistanceTest, MatchesPairwiseOracle) {
  testing::Gen gen(42);
  int checked = 0;
  while (checked < 200) {
    const int w = gen.uniform_int(1, 32), h = gen.uniform_int(1, 32);
    const Spacing sp{gen.uniform(0.5, 2.0), gen.uniform(0.5, 2.0)};
    LabelMap r = gen.coin() ? gen.rect_mask(w, h) : gen.mask(w, h, 0.3);
    LabelMap p = gen.coin() ? gen.rect_mask(w, h) : gen.mask(w, h, 0.3);
    r = LabelMap(w, h, r.data(), sp);
    p = LabelMap(w, h, p.data(), sp);
    const auto br = rim(r, 1), bp = rim(p, 1);
    if (br.empty() || bp.empty()) continue;
    ++checked;
    const auto rp = nearest(br, bp, sp), pr = nearest(bp, br, sp);
    const SurfaceDistances d = surface_distances(r, p, 1, 95.0);
    EXPECT_NEAR(d.hd.value, std::max(max_of(rp), max_of(pr)), 1e-9);
    EXPECT_NEAR(d.hd_pct.value,
                std::max(nearest_rank_percentile(rp, 95), nearest_rank_percentile(pr, 95)), 1e-9);
    double total = 0;
    for (double v : rp) total += v;
    for (double v : pr) total += v;
    EXPECT_NEAR(d.assd.value, total / static_cast<double>(rp.size() + pr.size()), 1e-9);
    EXPECT_NEAR(d.masd.value, 0.5 * (mean(rp) + mean(pr)), 1e-9);
    const double tau = gen.uniform(0.0, 4.0);
    int64_t within = 0;
    for (double v : rp) within += v <= tau;
    for (double v : pr) within += v <= tau;
    EXPECT_NEAR(nsd(r, p, 1, tau).value, double(within) / double(rp.size() + pr.size()), 1e-9);
  }
}

TEST(SurfaceDistanceTest, PairwiseAndDistanceTransformAgree) {
  testing::Gen gen(43);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = gen.uniform_int(2, 40), h = gen.uniform_int(2, 40);
    const Spacing sp{gen.uniform(0.5, 2.0), gen.uniform(0.5, 2.0)};
    const LabelMap r(w, h, gen.mask(w, h, 0.3).data(), sp);
    const LabelMap p(w, h, gen.mask(w, h, 0.3).data(), sp);
    const BoundarySet br = boundary_extract(r, 1), bp = boundary_extract(p, 1);
    if (br.empty() || bp.empty()) continue;
    const auto a = directed_distances(br, bp, DistanceMethod::pairwise);
    const auto b = directed_distances(br, bp, DistanceMethod::distance_transform);
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
  }
}

TEST(SurfaceDistanceTest, HausdorffSymmetricAndBoundsPercentile) {
  testing::Gen gen(44);
  for (int trial = 0; trial < 100; ++trial) {
    const LabelMap r = gen.mask(12, 12, 0.4), p = gen.mask(12, 12, 0.4);
    const SurfaceDistances ab = surface_distances(r, p, 1, 90.0);
    const SurfaceDistances ba = surface_distances(p, r, 1, 90.0);
    if (!ab.hd.defined()) continue;
    EXPECT_EQ(ab.hd.value, ba.hd.value);
    EXPECT_GE(ab.hd.value, ab.hd_pct.value);
    EXPECT_GE(ab.hd_pct.value, 0.0);
    EXPECT_EQ(ab.hd.value == 0.0, boundary_extract(r, 1).points == boundary_extract(p, 1).points);
  }
}

TEST(NsdTest, Examples) {
  const LabelMap a = square(10, 10, 2, 2, 4);
  EXPECT_EQ(nsd(a, a, 1, 0.0).value, 1.0);
  const LabelMap shifted = square(10, 10, 3, 2, 4);
  EXPECT_EQ(nsd(a, shifted, 1, 2.0).value, 1.0);
  // tau = 0 counts coincident rim pixels: the top and bottom rows, 6 of 12 per side.
  EXPECT_DOUBLE_EQ(nsd(a, shifted, 1, 0.0).value, 12.0 / 24.0);
  EXPECT_FALSE(nsd(LabelMap(4, 4), LabelMap(4, 4), 1, 1.0).defined());
}

TEST(NsdTest, BoundedAndMonotoneInTau) {
  testing::Gen gen(45);
  for (int trial = 0; trial < 100; ++trial) {
    const LabelMap r = gen.mask(10, 10, 0.4), p = gen.mask(10, 10, 0.4);
    double prev = -1.0;
    for (double tau : {0.0, 0.5, 1.0, 1.5, 3.0, 20.0}) {
      const MetricValue v = nsd(r, p, 1, tau);
      if (!v.defined()) break;
      EXPECT_GE(v.value, prev);
      EXPECT_LE(v.value, 1.0);
      prev = v.value;
    }
  }
}

TEST(BoundaryIouTest, Examples) {
  const LabelMap a = square(10, 10, 1, 1, 5);
  EXPECT_EQ(boundary_iou(a, a, 1, 1.0).value, 1.0);
  EXPECT_EQ(boundary_iou(a, square(10, 10, 7, 7, 3), 1, 1.0).value, 0.0);
  EXPECT_THROW(boundary_iou(a, a, 1, 0.0), ParameterError);
}

TEST(BoundaryIouTest, LargeBandIsMaskIou) {
  testing::Gen gen(46);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = gen.uniform_int(1, 16), h = gen.uniform_int(1, 16);
    const LabelMap r = gen.mask(w, h, 0.5), p = gen.mask(w, h, 0.5);
    const MetricValue iou = pixel_overlap(r, p, 1).iou;
    const MetricValue biou = boundary_iou(r, p, 1, std::hypot(w, h) + 1.0);
    ASSERT_EQ(iou.defined(), biou.defined());
    if (iou.defined()) {
      EXPECT_EQ(iou.value, biou.value);
    }
  }
}

TEST(SkeletonTest, SubsetOfForegroundAndLinesSurvive) {
  testing::Gen gen(47);
  for (int trial = 0; trial < 100; ++trial) {
    const LabelMap m = gen.mask(gen.uniform_int(1, 20), gen.uniform_int(1, 20), 0.6);
    const BinaryMask b = mask_of(m, 1);
    for (const Pixel& p : skeletonize(b).points) EXPECT_TRUE(b.at(p.x, p.y));
  }
  LabelMap line(9, 5);
  for (int x = 1; x < 8; ++x) line.set(x, 2, 1);
  EXPECT_EQ(skeletonize(mask_of(line, 1)).points.size(), 7u);
  // Two-pixel-thick bars keep at least one pixel.
  EXPECT_FALSE(skeletonize(mask_of(square(4, 4, 1, 1, 2), 1)).points.empty());
}

TEST(ClDiceTest, Examples) {
  LabelMap line(9, 5);
  for (int x = 1; x < 8; ++x) line.set(x, 2, 1);
  EXPECT_EQ(cl_dice(line, line, 1).value.value, 1.0);

  const LabelMap a = square(10, 10, 0, 0, 3), b = square(10, 10, 6, 6, 3);
  EXPECT_EQ(cl_dice(a, b, 1).value.value, 0.0);
  EXPECT_FALSE(cl_dice(a, LabelMap(10, 10), 1).value.defined());
}

TEST(ClDiceTest, FavoursCenterlinePreservingPrediction) {
  // A thick horizontal vessel with two side branches.
  LabelMap ref(21, 11);
  for (int x = 1; x < 20; ++x) {
    for (int y = 4; y <= 6; ++y) ref.set(x, y, 1);
  }
  for (int y = 1; y < 4; ++y) {
    ref.set(5, y, 1);
    ref.set(15, y, 1);
  }
  // Prediction 1 keeps only the central line; prediction 2 keeps branches and
  // the upper rim but drops the centerline.
  LabelMap centerline(21, 11), rim_only(21, 11);
  for (int x = 1; x < 20; ++x) centerline.set(x, 5, 1);
  for (int x = 1; x < 20; ++x) rim_only.set(x, 4, 1);
  for (int y = 1; y < 4; ++y) {
    rim_only.set(5, y, 1);
    rim_only.set(15, y, 1);
  }
  EXPECT_GT(pixel_overlap(ref, rim_only, 1).dsc.value, pixel_overlap(ref, centerline, 1).dsc.value);
  EXPECT_GT(cl_dice(ref, centerline, 1).value.value, cl_dice(ref, rim_only, 1).value.value);
}

TEST(VolumeErrorTest, Examples) {
  const LabelMap a = square(6, 6, 0, 0, 2);
  EXPECT_EQ(volume_error(a, a, 1).relative.value, 0.0);
  LabelMap r(5, 5), p(5, 5);
  for (int i = 0; i < 8; ++i) r.set(i % 5, i / 5, 1);
  for (int i = 0; i < 10; ++i) p.set(i % 5, i / 5, 1);
  const VolumeError v = volume_error(r, p, 1);
  EXPECT_EQ(v.absolute.value, 2.0);
  EXPECT_EQ(v.relative.value, 0.25);
  EXPECT_FALSE(volume_error(LabelMap(3, 3), square(3, 3, 0, 0, 1), 1).relative.defined());
}

TEST(SegmentationPropertyTest, DiceIouIdentityAndPixelF1) {
  testing::Gen gen(48);
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = gen.uniform_int(1, 8), h = gen.uniform_int(1, 8);
    const LabelMap r = gen.mask(w, h, gen.uniform()), p = gen.mask(w, h, gen.uniform());
    const PixelOverlap o = pixel_overlap(r, p, 1);
    if (!o.dsc.defined()) continue;
    EXPECT_NEAR(o.dsc.value, 2.0 * o.iou.value / (1.0 + o.iou.value), 1e-12);
    EXPECT_NEAR(o.f_beta.value, o.dsc.value, 1e-12);
  }
}

TEST(SegmentationPropertyTest, SinglePixelMattersForSmallStructuresOnly) {
  const LabelMap small = square(4, 4, 1, 1, 2);
  LabelMap small_missing = small;
  small_missing.set(1, 1, 0);
  // DSC falls from 1 to 6/7 and IoU from 1 to 3/4.
  const PixelOverlap o_small = pixel_overlap(small, small_missing, 1);
  EXPECT_DOUBLE_EQ(o_small.dsc.value, 6.0 / 7.0);
  EXPECT_GE(1.0 - o_small.iou.value, 0.25);

  const LabelMap big = square(52, 52, 1, 1, 50);
  LabelMap big_missing = big;
  big_missing.set(1, 1, 0);
  EXPECT_LT(1.0 - pixel_overlap(big, big_missing, 1).dsc.value, 0.001);
}

TEST(SegmentationPropertyTest, ErosionAndDilationShareHausdorffNotDice) {
  const LabelMap ref = square(12, 12, 3, 3, 5);
  const LabelMap eroded = square(12, 12, 4, 4, 3);
  const LabelMap dilated = square(12, 12, 2, 2, 7);
  EXPECT_EQ(surface_distances(ref, eroded, 1).hd.value, surface_distances(ref, dilated, 1).hd.value);
  EXPECT_NE(pixel_overlap(ref, eroded, 1).dsc.value, pixel_overlap(ref, dilated, 1).dsc.value);
}

TEST(SegmentationPropertyTest, InteriorHolesKeepNsdButChangeVolume) {
  const LabelMap ref = square(20, 20, 2, 2, 15);
  LabelMap holes = ref;
  for (int y = 6; y < 14; y += 3) {
    for (int x = 6; x < 14; x += 3) holes.set(x, y, 0);
  }
  // The outer rims coincide; only the pixels around each hole are far off.
  EXPECT_GE(nsd(ref, holes, 1, 2.0).value, 0.5);
  EXPECT_NE(volume_error(ref, holes, 1).relative.value, 0.0);
}

TEST(ComponentSizesTest, EightConnected) {
  const LabelMap m = LabelMap::from_rows({{1, 0, 0, 1}, {0, 1, 0, 1}, {0, 0, 0, 0}, {1, 1, 0, 0}});
  std::vector<int64_t> sizes = component_sizes(m, 1);
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<int64_t>{2, 2, 2}));
}

}  // namespace
}  // namespace valmet
