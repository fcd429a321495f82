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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valmet/detection.hpp"
#include "valmet/label_map.hpp"
#include "valmet/registry.hpp"

namespace valmet {

using Metadata = std::map<std::string, std::string>;

/// One image-level classification case. `scores` may be empty when only
/// hard predictions are available.
struct ClassificationItem {
  std::string item_id;
  int ref_class = 0;
  std::vector<double> scores;
  std::optional<int> pred_class;
  Metadata meta;
};

/// Reference and prediction maps of one image. Gray values are class ids
/// (SemS) or instance ids (InS).
struct SegmentationItem {
  std::string item_id;
  LabelMap reference;
  LabelMap prediction;
  Metadata meta;
};

struct DetectionImage {
  std::string image_id;
  std::vector<DetectionObject> refs;
  std::vector<DetectionObject> preds;
  Metadata meta;
};

/// Everything one evaluation run reads, sorted by item id.
struct Dataset {
  Task task = Task::ImLC;
  int num_classes = 2;
  std::vector<ClassificationItem> classification;
  std::vector<SegmentationItem> segmentation;
  std::vector<DetectionImage> detection;

  size_t size() const;
  /// Metadata of item `i` whatever the task.
  const Metadata& meta(size_t i) const;
  const std::string& id(size_t i) const;

  /// Items sorted by id, detection objects by (class, id).
  bool is_canonical() const;
  Dataset canonical() const;
};

}  // namespace valmet
