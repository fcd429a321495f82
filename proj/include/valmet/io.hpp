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

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "valmet/dataset.hpp"
#include "valmet/detection.hpp"
#include "valmet/label_map.hpp"
#include "valmet/metric_value.hpp"

namespace valmet {

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input. The message names the source and the line (text
/// formats) or byte offset (binary formats).
class ParseError : public IoError {
 public:
  using IoError::IoError;
};

/// Inputs that parse but do not fit together, e.g. a detection on an
/// unknown image or a duplicated id.
class IntegrityError : public IoError {
 public:
  using IoError::IoError;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

struct ClassificationTable {
  int num_classes = 0;  // number of score_k columns (0 without scores)
  std::vector<ClassificationItem> items;
};

/// Comma-separated, header required: item_id, ref_class, score_0 ...
/// score_{C-1}, optional pred_class, then meta.* columns. Without score
/// columns pred_class is mandatory. Rows are returned sorted by item id.
ClassificationTable parse_classification_csv(std::string_view text,
                                             std::string_view source = "<csv>");
ClassificationTable read_classification_csv(const std::filesystem::path& path);

/// Plain (P2) or raw (P5) graymap; gray value = class or instance id.
LabelMap parse_pgm(std::string_view bytes, std::string_view source = "<pgm>", Spacing spacing = {});
LabelMap read_pgm(const std::filesystem::path& path, Spacing spacing = {});
std::string format_pgm(const LabelMap& map, bool binary = false);
void write_pgm(const std::filesystem::path& path, const LabelMap& map, bool binary = false);

/// Loads each mask file once.
class MaskCache {
 public:
  const LabelMap& get(const std::filesystem::path& path, Spacing spacing = {});

 private:
  std::map<std::filesystem::path, std::shared_ptr<const LabelMap>> maps_;
};

struct ImageEntry {
  std::string image_id;
  Metadata meta;
};

/// One JSON object per line:
///   {"image_id": "...", "class": 1, "id": 7,
///    "geometry": {"type": "box", "coords": [x0, y0, x1, y1]}
///              | {"type": "point", "coords": [x, y]}
///              | {"type": "mask", "file": "m.pgm", "instance": 3},
///    "score": 0.9, "meta.<key>": "..."}
/// "id" and "score" are optional. Objects without ids are numbered per
/// image after a canonical sort, so line order never matters. Mask files
/// resolve relative to the detection file.
std::vector<DetectionObject> read_detections_jsonl(const std::filesystem::path& path,
                                                   MaskCache& masks);
std::vector<DetectionObject> parse_detections_jsonl(std::string_view text,
                                                    const std::filesystem::path& base_dir,
                                                    MaskCache& masks,
                                                    std::string_view source = "<jsonl>");

/// {"image_id": "...", "meta.<key>": "..."} per line.
std::vector<ImageEntry> read_images_jsonl(const std::filesystem::path& path);
std::vector<ImageEntry> parse_images_jsonl(std::string_view text, std::string_view source = "<jsonl>");

/// Groups objects by image. Throws IntegrityError listing every image id
/// that objects reference but `images` lacks, and on duplicate ids.
std::vector<DetectionImage> assemble_detection(std::vector<ImageEntry> images,
                                               std::vector<DetectionObject> refs,
                                               std::vector<DetectionObject> preds);

/// {"item_id": "...", "reference": "r.pgm", "prediction": "p.pgm",
///  "spacing": [sx, sy], "meta.<key>": "..."} per line; paths relative
/// to the manifest.
std::vector<SegmentationItem> read_manifest(const std::filesystem::path& path);

struct InputPaths {
  std::filesystem::path classification;  // ImLC
  std::filesystem::path manifest;        // SemS, InS
  std::filesystem::path references;      // ObD
  std::filesystem::path predictions;     // ObD
  std::filesystem::path images;          // ObD
};

/// Reads what `task` needs. `num_classes` overrides the inferred count.
Dataset load_dataset(const InputPaths& paths, Task task, std::optional<int> num_classes = std::nullopt);

}  // namespace valmet
