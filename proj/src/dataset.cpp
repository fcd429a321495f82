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

#include "valmet/dataset.hpp"

#include <algorithm>
#include <tuple>

namespace valmet {

size_t Dataset::size() const {
  switch (task) {
    case Task::ImLC: return classification.size();
    case Task::SemS:
    case Task::InS: return segmentation.size();
    case Task::ObD: return detection.size();
  }
  return 0;
}

const Metadata& Dataset::meta(size_t i) const {
  switch (task) {
    case Task::ImLC: return classification.at(i).meta;
    case Task::ObD: return detection.at(i).meta;
    default: return segmentation.at(i).meta;
  }
}

const std::string& Dataset::id(size_t i) const {
  switch (task) {
    case Task::ImLC: return classification.at(i).item_id;
    case Task::ObD: return detection.at(i).image_id;
    default: return segmentation.at(i).item_id;
  }
}

namespace {

bool by_item(const auto& a, const auto& b) { return a.item_id < b.item_id; }
bool by_image(const DetectionImage& a, const DetectionImage& b) { return a.image_id < b.image_id; }
bool by_object(const DetectionObject& a, const DetectionObject& b) {
  return std::tie(a.class_id, a.id) < std::tie(b.class_id, b.id);
}

}  // namespace

bool Dataset::is_canonical() const {
  auto sorted = [](const auto& v, auto less) { return std::is_sorted(v.begin(), v.end(), less); };
  if (!sorted(classification, by_item<ClassificationItem, ClassificationItem>)) return false;
  if (!sorted(segmentation, by_item<SegmentationItem, SegmentationItem>)) return false;
  if (!sorted(detection, by_image)) return false;
  return std::all_of(detection.begin(), detection.end(), [&](const DetectionImage& im) {
    return sorted(im.refs, by_object) && sorted(im.preds, by_object);
  });
}

Dataset Dataset::canonical() const {
  Dataset out = *this;
  std::stable_sort(out.classification.begin(), out.classification.end(),
                   by_item<ClassificationItem, ClassificationItem>);
  std::stable_sort(out.segmentation.begin(), out.segmentation.end(),
                   by_item<SegmentationItem, SegmentationItem>);
  std::stable_sort(out.detection.begin(), out.detection.end(), by_image);
  for (auto& im : out.detection) {
    std::stable_sort(im.refs.begin(), im.refs.end(), by_object);
    std::stable_sort(im.preds.begin(), im.preds.end(), by_object);
  }
  return out;
}

}  // namespace valmet
