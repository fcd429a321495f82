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

namespace valmet {

Skeleton skeletonize(const BinaryMask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  std::vector<uint8_t> img = mask.on;
  auto px = [&](int x, int y) -> int {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0;
    return img[static_cast<size_t>(y) * w + x] != 0;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!px(x, y)) continue;
          // P2..P9 clockwise from north.
          const int n[8] = {px(x, y - 1),     px(x + 1, y - 1), px(x + 1, y), px(x + 1, y + 1),
                            px(x, y + 1),     px(x - 1, y + 1), px(x - 1, y), px(x - 1, y - 1)};
          int b = 0, a = 0;
          for (int i = 0; i < 8; ++i) {
            b += n[i];
            a += (n[i] == 0 && n[(i + 1) % 8] == 1);
          }
          if (b < 2 || b > 6 || a != 1) continue;
          const int p2 = n[0], p4 = n[2], p6 = n[4], p8 = n[6];
          const bool remove = pass == 0 ? (p2 * p4 * p6 == 0 && p4 * p6 * p8 == 0)
                                        : (p2 * p4 * p8 == 0 && p2 * p6 * p8 == 0);
          if (remove) {
            img[static_cast<size_t>(y) * w + x] = 0;
            changed = true;
          }
        }
      }
    }
  }

  Skeleton s{w, h, {}};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (px(x, y)) s.points.push_back({x, y});
  return s;
}

}  // namespace valmet
