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
#include <span>
#include <vector>

#include "valmet/label_map.hpp"

namespace valmet::kernels {

/// For every point of `from`, the squared Euclidean distance (in physical
/// units) to the nearest point of `to`; +inf when `to` is empty.
std::vector<double> directed_min_sqdist(std::span<const Pixel> from, std::span<const Pixel> to,
                                        const Spacing& spacing);
std::vector<double> directed_min_sqdist_serial(std::span<const Pixel> from,
                                               std::span<const Pixel> to, const Spacing& spacing);

/// Exact squared Euclidean distance transform: for every grid cell, the
/// squared distance to the nearest seed (seeds[i] != 0). Separable lower
/// envelope of parabolas, columns then rows. +inf without seeds.
std::vector<double> squared_distance_transform(std::span<const uint8_t> seeds, int width,
                                               int height, const Spacing& spacing);
std::vector<double> squared_distance_transform_serial(std::span<const uint8_t> seeds, int width,
                                                      int height, const Spacing& spacing);

/// |A|, |B| and |A n B| of two equally sized 0/1 masks.
struct OverlapCounts {
  int64_t a = 0;
  int64_t b = 0;
  int64_t both = 0;
};
OverlapCounts overlap_counts(std::span<const uint8_t> a, std::span<const uint8_t> b);
OverlapCounts overlap_counts_serial(std::span<const uint8_t> a, std::span<const uint8_t> b);

}  // namespace valmet::kernels
