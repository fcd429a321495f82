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

#include "valmet/kernels/distance.hpp"

#include <limits>

#include "valmet/kernels/parallel.hpp"
#include "valmet/metric_value.hpp"

namespace valmet::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double sqdist(const Pixel& a, const Pixel& b, const Spacing& s) {
  const double dx = static_cast<double>(a.x - b.x) * s.sx;
  const double dy = static_cast<double>(a.y - b.y) * s.sy;
  return dx * dx + dy * dy;
}

double nearest_sq(const Pixel& p, std::span<const Pixel> to, const Spacing& s) {
  double best = kInf;
  for (const auto& q : to) {
    const double d = sqdist(p, q, s);
    if (d < best) best = d;
  }
  return best;
}

// 1D lower envelope of parabolas (Felzenszwalb & Huttenlocher). `f` holds
// n samples at stride `stride`; results overwrite `out` at the same stride.
void envelope_1d(const double* f, double* out, int n, size_t stride, double step,
                 std::vector<int>& v, std::vector<double>& z) {
  v.resize(static_cast<size_t>(n));
  z.resize(static_cast<size_t>(n) + 1);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    const double fq = f[static_cast<size_t>(q) * stride];
    if (fq == kInf) continue;
    const double pq = q * step;
    while (k >= 0) {
      const double pv = v[k] * step;
      const double fv = f[static_cast<size_t>(v[k]) * stride];
      const double s = ((fq + pq * pq) - (fv + pv * pv)) / (2.0 * (pq - pv));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -kInf : ((fq + pq * pq) -
                             (f[static_cast<size_t>(v[k - 1]) * stride] +
                              (v[k - 1] * step) * (v[k - 1] * step))) /
                                (2.0 * (pq - v[k - 1] * step));
    z[k + 1] = kInf;
  }
  if (k < 0) {
    for (int p = 0; p < n; ++p) out[static_cast<size_t>(p) * stride] = kInf;
    return;
  }
  int j = 0;
  for (int p = 0; p < n; ++p) {
    const double pp = p * step;
    while (z[j + 1] < pp) ++j;
    const double d = static_cast<double>(p - v[j]) * step;
    out[static_cast<size_t>(p) * stride] = d * d + f[static_cast<size_t>(v[j]) * stride];
  }
}

template <typename ForEach>
std::vector<double> distance_transform(std::span<const uint8_t> seeds, int width, int height,
                                       const Spacing& spacing, ForEach&& for_each) {
  if (width <= 0 || height <= 0 ||
      seeds.size() != static_cast<size_t>(width) * static_cast<size_t>(height)) {
    throw ShapeError("distance transform seeds do not match the grid");
  }
  const size_t w = static_cast<size_t>(width);
  std::vector<double> init(seeds.size());
  for (size_t i = 0; i < seeds.size(); ++i) init[i] = seeds[i] ? 0.0 : kInf;
  std::vector<double> cols(seeds.size());
  for_each(width, [&](int64_t x) {
    std::vector<int> v;
    std::vector<double> z;
    envelope_1d(init.data() + x, cols.data() + x, height, w, spacing.sy, v, z);
  });
  std::vector<double> out(seeds.size());
  for_each(height, [&](int64_t y) {
    std::vector<int> v;
    std::vector<double> z;
    envelope_1d(cols.data() + static_cast<size_t>(y) * w, out.data() + static_cast<size_t>(y) * w,
                width, 1, spacing.sx, v, z);
  });
  return out;
}

}  // namespace

std::vector<double> directed_min_sqdist(std::span<const Pixel> from, std::span<const Pixel> to,
                                        const Spacing& spacing) {
  std::vector<double> out(from.size());
  const int64_t n = static_cast<int64_t>(from.size());
#pragma omp parallel for schedule(static) num_threads(num_threads())
  for (int64_t i = 0; i < n; ++i) out[static_cast<size_t>(i)] = nearest_sq(from[i], to, spacing);
  return out;
}

std::vector<double> directed_min_sqdist_serial(std::span<const Pixel> from,
                                               std::span<const Pixel> to, const Spacing& spacing) {
  std::vector<double> out(from.size());
  for (size_t i = 0; i < from.size(); ++i) out[i] = nearest_sq(from[i], to, spacing);
  return out;
}

std::vector<double> squared_distance_transform(std::span<const uint8_t> seeds, int width,
                                               int height, const Spacing& spacing) {
  return distance_transform(seeds, width, height, spacing,
                            [](int64_t n, const auto& body) { parallel_for(n, body); });
}

std::vector<double> squared_distance_transform_serial(std::span<const uint8_t> seeds, int width,
                                                      int height, const Spacing& spacing) {
  return distance_transform(seeds, width, height, spacing,
                            [](int64_t n, const auto& body) { serial_for(n, body); });
}

OverlapCounts overlap_counts(std::span<const uint8_t> a, std::span<const uint8_t> b) {
  if (a.size() != b.size()) throw ShapeError("masks differ in size");
  int64_t ca = 0, cb = 0, both = 0;
  const int64_t n = static_cast<int64_t>(a.size());
#pragma omp parallel for reduction(+ : ca, cb, both) schedule(static) num_threads(num_threads())
  for (int64_t i = 0; i < n; ++i) {
    ca += a[i] != 0;
    cb += b[i] != 0;
    both += (a[i] != 0) && (b[i] != 0);
  }
  return {ca, cb, both};
}

OverlapCounts overlap_counts_serial(std::span<const uint8_t> a, std::span<const uint8_t> b) {
  if (a.size() != b.size()) throw ShapeError("masks differ in size");
  OverlapCounts c;
  for (size_t i = 0; i < a.size(); ++i) {
    c.a += a[i] != 0;
    c.b += b[i] != 0;
    c.both += (a[i] != 0) && (b[i] != 0);
  }
  return c;
}

}  // namespace valmet::kernels
