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

#include "valmet/label_map.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "valmet/metric_value.hpp"

namespace valmet {

namespace {

void check_spacing(const Spacing& s) {
  if (!(s.sx > 0.0) || !(s.sy > 0.0) || std::isinf(s.sx) || std::isinf(s.sy)) {
    throw ParameterError("pixel spacing must be positive and finite");
  }
}

}  // namespace

LabelMap::LabelMap(int width, int height, std::vector<int32_t> data, Spacing spacing)
    : width_(width), height_(height), data_(std::move(data)), spacing_(spacing) {
  if (width <= 0 || height <= 0) throw ParameterError("label map dimensions must be positive");
  if (data_.size() != static_cast<size_t>(width) * static_cast<size_t>(height)) {
    throw ShapeError("label map data length must equal width * height");
  }
  for (int32_t v : data_) {
    if (v < 0) throw ParameterError("label ids must be non-negative");
  }
  check_spacing(spacing_);
}

LabelMap::LabelMap(int width, int height, int32_t fill, Spacing spacing)
    : LabelMap(width, height,
               std::vector<int32_t>(static_cast<size_t>(std::max(width, 0)) *
                                        static_cast<size_t>(std::max(height, 0)),
                                    fill),
               spacing) {}

LabelMap LabelMap::from_rows(std::initializer_list<std::initializer_list<int32_t>> rows,
                             Spacing spacing) {
  const int h = static_cast<int>(rows.size());
  const int w = h > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  std::vector<int32_t> data;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != w) throw ShapeError("ragged label map rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return LabelMap(w, h, std::move(data), spacing);
}

int64_t LabelMap::count(int32_t k) const {
  return std::count(data_.begin(), data_.end(), k);
}

std::vector<int32_t> LabelMap::labels() const {
  std::set<int32_t> ids(data_.begin(), data_.end());
  ids.erase(0);
  return {ids.begin(), ids.end()};
}

int64_t BinaryMask::count() const {
  return std::count(on.begin(), on.end(), uint8_t{1});
}

BinaryMask mask_of(const LabelMap& map, int32_t k) {
  BinaryMask m{map.width(), map.height(), map.spacing(), {}};
  m.on.resize(map.size());
  for (size_t i = 0; i < map.size(); ++i) m.on[i] = map.data()[i] == k ? 1 : 0;
  return m;
}

std::vector<int64_t> component_sizes(const LabelMap& map, int32_t k) {
  std::vector<uint8_t> seen(map.size(), 0);
  std::vector<int64_t> sizes;
  std::vector<Pixel> stack;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.at(x, y) != k || seen[map.index(x, y)]) continue;
      int64_t size = 0;
      stack.push_back({x, y});
      seen[map.index(x, y)] = 1;
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        ++size;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x + dx, ny = p.y + dy;
            if ((dx == 0 && dy == 0) || !map.contains(nx, ny)) continue;
            const size_t idx = map.index(nx, ny);
            if (map.at(nx, ny) == k && !seen[idx]) {
              seen[idx] = 1;
              stack.push_back({nx, ny});
            }
          }
        }
      }
      sizes.push_back(size);
    }
  }
  return sizes;
}

}  // namespace valmet
