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

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace valmet {

/// Physical pixel size along x (columns) and y (rows).
struct Spacing {
  double sx = 1.0;
  double sy = 1.0;
  friend bool operator==(const Spacing&, const Spacing&) = default;
};

/// Pixel coordinate; ordered row-major (y first).
struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
  friend auto operator<=>(const Pixel& a, const Pixel& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

/// Row-major 2D grid of class or instance ids; 0 is background.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height, std::vector<int32_t> data, Spacing spacing = {});
  LabelMap(int width, int height, int32_t fill = 0, Spacing spacing = {});

  /// Rows top to bottom, for literals in tests and examples.
  static LabelMap from_rows(std::initializer_list<std::initializer_list<int32_t>> rows,
                            Spacing spacing = {});

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return data_.size(); }
  const Spacing& spacing() const { return spacing_; }
  const std::vector<int32_t>& data() const { return data_; }

  int32_t at(int x, int y) const { return data_[index(x, y)]; }
  void set(int x, int y, int32_t value) { data_[index(x, y)] = value; }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  size_t index(int x, int y) const {
    return static_cast<size_t>(y) * static_cast<size_t>(width_) + static_cast<size_t>(x);
  }

  bool same_shape(const LabelMap& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  int64_t count(int32_t k) const;
  /// Sorted distinct non-zero ids.
  std::vector<int32_t> labels() const;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<int32_t> data_;
  Spacing spacing_;
};

/// Foreground flags (0/1) on a grid.
struct BinaryMask {
  int width = 0;
  int height = 0;
  Spacing spacing;
  std::vector<uint8_t> on;

  bool at(int x, int y) const {
    return on[static_cast<size_t>(y) * static_cast<size_t>(width) + static_cast<size_t>(x)] != 0;
  }
  int64_t count() const;
};

BinaryMask mask_of(const LabelMap& map, int32_t k);

/// Pixel counts of the 8-connected components of class k.
std::vector<int64_t> component_sizes(const LabelMap& map, int32_t k);

}  // namespace valmet
