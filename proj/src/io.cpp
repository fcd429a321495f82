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

#include "valmet/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

namespace valmet {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

namespace {

std::string at_line(std::string_view source, size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

// Lines without their terminators, numbered from 1.
std::vector<std::pair<size_t, std::string_view>> split_lines(std::string_view text) {
  std::vector<std::pair<size_t, std::string_view>> out;
  size_t line = 1, start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto s = text.substr(start, end - start);
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    out.emplace_back(line++, s);
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

std::vector<std::string> split_csv(std::string_view line, const std::string& where) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError(where + "unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

template <typename T>
T parse_number(std::string_view s, const std::string& where, std::string_view what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(where + "invalid " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

ClassificationTable parse_classification_csv(std::string_view text, std::string_view source) {
  const auto lines = split_lines(text);
  size_t li = 0;
  while (li < lines.size() && blank(lines[li].second)) ++li;
  if (li == lines.size()) throw ParseError(std::string(source) + ": missing header");
  const std::string header_where = at_line(source, lines[li].first);
  const auto header = split_csv(lines[li].second, header_where);
  if (header.size() < 2 || header[0] != "item_id" || header[1] != "ref_class") {
    throw ParseError(header_where + "header must start with item_id,ref_class");
  }
  int n_scores = 0;
  std::optional<size_t> pred_col;
  std::vector<std::pair<size_t, std::string>> meta_cols;
  for (size_t c = 2; c < header.size(); ++c) {
    const auto& h = header[c];
    if (h.rfind("score_", 0) == 0) {
      if (h != "score_" + std::to_string(n_scores) || !meta_cols.empty() || pred_col) {
        throw ParseError(header_where + "score columns must be score_0, score_1, ... in order");
      }
      ++n_scores;
    } else if (h == "pred_class") {
      if (pred_col) throw ParseError(header_where + "duplicate pred_class column");
      pred_col = c;
    } else if (h.rfind("meta.", 0) == 0 && h.size() > 5) {
      meta_cols.emplace_back(c, h.substr(5));
    } else {
      throw ParseError(header_where + "unknown column '" + h + "'");
    }
  }
  if (n_scores == 1) throw ParseError(header_where + "need at least two score columns");
  if (n_scores == 0 && !pred_col) {
    throw ParseError(header_where + "need score columns or a pred_class column");
  }

  ClassificationTable table;
  table.num_classes = n_scores;
  std::set<std::string> seen;
  for (++li; li < lines.size(); ++li) {
    const auto& [number, line] = lines[li];
    if (blank(line)) continue;
    const std::string where = at_line(source, number);
    const auto f = split_csv(line, where);
    if (f.size() != header.size()) {
      throw ParseError(where + "expected " + std::to_string(header.size()) + " fields (" +
                       std::to_string(n_scores) + " scores), got " + std::to_string(f.size()));
    }
    ClassificationItem it;
    it.item_id = f[0];
    if (it.item_id.empty()) throw ParseError(where + "empty item_id");
    if (!seen.insert(it.item_id).second) {
      throw IntegrityError(where + "duplicate item_id '" + it.item_id + "'");
    }
    it.ref_class = parse_number<int>(f[1], where, "ref_class");
    for (int k = 0; k < n_scores; ++k) {
      const double s = parse_number<double>(f[2 + static_cast<size_t>(k)], where, "score");
      if (!(s >= 0.0 && s <= 1.0)) throw ParseError(where + "score outside [0,1]");
      it.scores.push_back(s);
    }
    if (pred_col) it.pred_class = parse_number<int>(f[*pred_col], where, "pred_class");
    const int limit = n_scores > 0 ? n_scores : std::numeric_limits<int>::max();
    if (it.ref_class < 0 || it.ref_class >= limit) throw ParseError(where + "ref_class out of range");
    if (it.pred_class && (*it.pred_class < 0 || *it.pred_class >= limit)) {
      throw ParseError(where + "pred_class out of range");
    }
    for (const auto& [c, key] : meta_cols) it.meta[key] = f[c];
    table.items.push_back(std::move(it));
  }
  std::sort(table.items.begin(), table.items.end(),
            [](const auto& a, const auto& b) { return a.item_id < b.item_id; });
  return table;
}

ClassificationTable read_classification_csv(const fs::path& path) {
  return parse_classification_csv(read_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Graymaps

namespace {

class PgmReader {
 public:
  PgmReader(std::string_view bytes, std::string_view source) : b_(bytes), source_(source) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(std::string(source_) + ": byte " + std::to_string(pos_) + ": " + msg);
  }

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      const char c = b_[pos_];
      if (c == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int64_t integer(const char* what) {
    skip_space_and_comments();
    const size_t start = pos_;
    while (pos_ < b_.size() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) ++pos_;
    if (start == pos_) fail(std::string("expected ") + what);
    if (pos_ < b_.size() && !std::isspace(static_cast<unsigned char>(b_[pos_])) && b_[pos_] != '#') {
      fail(std::string("malformed ") + what);
    }
    if (pos_ - start > 9) fail(std::string(what) + " too large");
    int64_t v = 0;
    std::from_chars(b_.data() + start, b_.data() + pos_, v);
    return v;
  }

  std::string_view magic() {
    if (b_.size() < 2) fail("truncated header");
    pos_ = 2;
    return b_.substr(0, 2);
  }

  size_t pos() const { return pos_; }
  void set_pos(size_t p) { pos_ = p; }
  std::string_view bytes() const { return b_; }

 private:
  std::string_view b_;
  std::string_view source_;
  size_t pos_ = 0;
};

}  // namespace

LabelMap parse_pgm(std::string_view bytes, std::string_view source, Spacing spacing) {
  PgmReader r(bytes, source);
  const auto magic = r.magic();
  if (magic != "P2" && magic != "P5") r.fail("not a P2/P5 graymap");
  const int64_t w = r.integer("width");
  const int64_t h = r.integer("height");
  const int64_t maxval = r.integer("maxval");
  if (w <= 0 || h <= 0) r.fail("width and height must be positive");
  if (maxval <= 0 || maxval > 65535) r.fail("maxval must lie in [1, 65535]");
  const auto n = static_cast<size_t>(w * h);
  std::vector<int32_t> data(n);
  if (magic == "P2") {
    for (size_t i = 0; i < n; ++i) {
      const int64_t v = r.integer("pixel value");
      if (v > maxval) r.fail("pixel value above maxval");
      data[i] = static_cast<int32_t>(v);
    }
  } else {
    if (r.pos() >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[r.pos()]))) {
      r.fail("expected whitespace after maxval");
    }
    r.set_pos(r.pos() + 1);
    const size_t bpp = maxval < 256 ? 1 : 2;
    if (bytes.size() - r.pos() < n * bpp) r.fail("truncated pixel data");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + r.pos());
    for (size_t i = 0; i < n; ++i) {
      const int32_t v = bpp == 1 ? p[i] : (p[2 * i] << 8 | p[2 * i + 1]);
      if (v > maxval) {
        r.set_pos(r.pos() + i * bpp);
        r.fail("pixel value above maxval");
      }
      data[i] = v;
    }
  }
  return LabelMap(static_cast<int>(w), static_cast<int>(h), std::move(data), spacing);
}

LabelMap read_pgm(const fs::path& path, Spacing spacing) {
  return parse_pgm(read_file(path), path.string(), spacing);
}

std::string format_pgm(const LabelMap& map, bool binary) {
  int32_t maxval = 1;
  for (int32_t v : map.data()) {
    if (v < 0 || v > 65535) throw ParameterError("graymap values must lie in [0, 65535]");
    maxval = std::max(maxval, v);
  }
  std::string out = std::string(binary ? "P5" : "P2") + "\n" + std::to_string(map.width()) + " " +
                    std::to_string(map.height()) + "\n" + std::to_string(maxval) + "\n";
  if (binary) {
    for (int32_t v : map.data()) {
      if (maxval >= 256) out += static_cast<char>(v >> 8);
      out += static_cast<char>(v & 0xff);
    }
    return out;
  }
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (x) out += ' ';
      out += std::to_string(map.at(x, y));
    }
    out += '\n';
  }
  return out;
}

void write_pgm(const fs::path& path, const LabelMap& map, bool binary) {
  write_file(path, format_pgm(map, binary));
}

const LabelMap& MaskCache::get(const fs::path& path, Spacing spacing) {
  const auto key = path.lexically_normal();
  auto it = maps_.find(key);
  if (it == maps_.end()) {
    it = maps_.emplace(key, std::make_shared<const LabelMap>(read_pgm(key, spacing))).first;
  }
  return *it->second;
}

// ---------------------------------------------------------------------------
// Line-delimited JSON

namespace {

template <typename Fn>
void for_each_json_line(std::string_view text, std::string_view source, Fn fn) {
  for (const auto& [number, line] : split_lines(text)) {
    if (blank(line)) continue;
    const std::string where = at_line(source, number);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where + "byte " + std::to_string(e.byte) + ": invalid JSON");
    }
    if (!j.is_object()) throw ParseError(where + "expected a JSON object");
    try {
      fn(j, where);
    } catch (const json::exception& e) {
      throw ParseError(where + e.what());
    }
  }
}

std::string meta_string(const json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

Metadata parse_meta(const json& j, const std::string& where) {
  Metadata meta;
  for (const auto& [k, v] : j.items()) {
    if (k.rfind("meta.", 0) == 0) {
      if (k.size() == 5) throw ParseError(where + "empty metadata key");
      meta[k.substr(5)] = meta_string(v);
    }
  }
  if (j.contains("meta")) {
    if (!j["meta"].is_object()) throw ParseError(where + "'meta' must be an object");
    for (const auto& [k, v] : j["meta"].items()) {
      if (k.empty()) throw ParseError(where + "empty metadata key");
      meta[k] = meta_string(v);
    }
  }
  return meta;
}

std::string required_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string() || j[key].get<std::string>().empty()) {
    throw ParseError(where + "missing string field '" + key + "'");
  }
  return j[key].get<std::string>();
}

struct ParsedObject {
  DetectionObject obj;
  bool has_id = false;
  // canonical sort key for objects without ids
  int type = 0;
  std::vector<double> coords;
  std::string file;
  int instance = 0;
};

auto sort_key(const ParsedObject& p) {
  return std::tie(p.obj.image_id, p.obj.class_id, p.type, p.coords, p.file, p.instance, p.obj.score);
}

}  // namespace

std::vector<DetectionObject> parse_detections_jsonl(std::string_view text, const fs::path& base_dir,
                                                    MaskCache& masks, std::string_view source) {
  std::vector<ParsedObject> parsed;
  for_each_json_line(text, source, [&](const json& j, const std::string& where) {
    ParsedObject p;
    p.obj.image_id = required_string(j, "image_id", where);
    if (!j.contains("class") || !j["class"].is_number_integer()) {
      throw ParseError(where + "missing integer field 'class'");
    }
    p.obj.class_id = j["class"].get<int>();
    if (j.contains("id")) {
      if (!j["id"].is_number_integer()) throw ParseError(where + "'id' must be an integer");
      p.obj.id = j["id"].get<int>();
      p.has_id = true;
    }
    if (j.contains("score") && !j["score"].is_null()) {
      if (!j["score"].is_number()) throw ParseError(where + "'score' must be a number");
      const double s = j["score"].get<double>();
      if (!(s >= 0.0 && s <= 1.0)) throw ParseError(where + "score outside [0,1]");
      p.obj.score = s;
    }
    if (!j.contains("geometry") || !j["geometry"].is_object()) {
      throw ParseError(where + "missing object field 'geometry'");
    }
    const json& g = j["geometry"];
    const std::string type = required_string(g, "type", where);
    auto coords = [&](size_t n) {
      if (!g.contains("coords") || !g["coords"].is_array() || g["coords"].size() != n) {
        throw ParseError(where + type + " geometry needs " + std::to_string(n) + " coords");
      }
      std::vector<double> c;
      for (const auto& v : g["coords"]) {
        if (!v.is_number()) throw ParseError(where + "coords must be numbers");
        c.push_back(v.get<double>());
      }
      return c;
    };
    if (type == "box") {
      p.type = 0;
      p.coords = coords(4);
      Box b{p.coords[0], p.coords[1], p.coords[2], p.coords[3]};
      try {
        b.validate();
      } catch (const ParameterError& e) {
        throw ParseError(where + e.what());
      }
      p.obj.geometry = b;
    } else if (type == "point") {
      p.type = 1;
      p.coords = coords(2);
      p.obj.geometry = Point2{p.coords[0], p.coords[1]};
    } else if (type == "mask") {
      p.type = 2;
      p.file = required_string(g, "file", where);
      if (!g.contains("instance") || !g["instance"].is_number_integer()) {
        throw ParseError(where + "mask geometry needs an integer 'instance'");
      }
      p.instance = g["instance"].get<int>();
      const auto& map = masks.get(base_dir / p.file);
      try {
        p.obj.geometry = Region::from_label(map, p.instance);
      } catch (const ParameterError& e) {
        throw ParseError(where + p.file + ": " + e.what());
      }
    } else {
      throw ParseError(where + "unknown geometry type '" + type + "'");
    }
    parse_meta(j, where);
    parsed.push_back(std::move(p));
  });

  const size_t with_id = static_cast<size_t>(
      std::count_if(parsed.begin(), parsed.end(), [](const ParsedObject& p) { return p.has_id; }));
  if (with_id != 0 && with_id != parsed.size()) {
    throw ParseError(std::string(source) + ": either every object or none must carry an 'id'");
  }
  if (with_id == 0) {
    std::stable_sort(parsed.begin(), parsed.end(),
                     [](const ParsedObject& a, const ParsedObject& b) { return sort_key(a) < sort_key(b); });
    std::map<std::string, int> next;
    for (auto& p : parsed) p.obj.id = ++next[p.obj.image_id];
  }
  std::vector<DetectionObject> out;
  out.reserve(parsed.size());
  for (auto& p : parsed) out.push_back(std::move(p.obj));
  return out;
}

std::vector<DetectionObject> read_detections_jsonl(const fs::path& path, MaskCache& masks) {
  return parse_detections_jsonl(read_file(path), path.parent_path(), masks, path.string());
}

std::vector<ImageEntry> parse_images_jsonl(std::string_view text, std::string_view source) {
  std::vector<ImageEntry> out;
  for_each_json_line(text, source, [&](const json& j, const std::string& where) {
    out.push_back({required_string(j, "image_id", where), parse_meta(j, where)});
  });
  return out;
}

std::vector<ImageEntry> read_images_jsonl(const fs::path& path) {
  return parse_images_jsonl(read_file(path), path.string());
}

std::vector<DetectionImage> assemble_detection(std::vector<ImageEntry> images,
                                               std::vector<DetectionObject> refs,
                                               std::vector<DetectionObject> preds) {
  std::sort(images.begin(), images.end(),
            [](const ImageEntry& a, const ImageEntry& b) { return a.image_id < b.image_id; });
  std::vector<DetectionImage> out;
  std::map<std::string, size_t> index;
  for (auto& im : images) {
    if (!index.emplace(im.image_id, out.size()).second) {
      throw IntegrityError("duplicate image id '" + im.image_id + "'");
    }
    out.push_back({im.image_id, {}, {}, std::move(im.meta)});
  }
  std::set<std::string> missing;
  auto place = [&](std::vector<DetectionObject>& objects, bool is_ref) {
    for (auto& o : objects) {
      auto it = index.find(o.image_id);
      if (it == index.end()) {
        missing.insert(o.image_id);
        continue;
      }
      (is_ref ? out[it->second].refs : out[it->second].preds).push_back(std::move(o));
    }
  };
  place(refs, true);
  place(preds, false);
  if (!missing.empty()) {
    std::string ids;
    for (const auto& m : missing) ids += (ids.empty() ? "" : ", ") + m;
    throw IntegrityError("detections reference unknown images: " + ids);
  }
  for (auto& im : out) {
    for (auto* list : {&im.refs, &im.preds}) {
      std::sort(list->begin(), list->end(),
                [](const DetectionObject& a, const DetectionObject& b) { return a.id < b.id; });
      for (size_t i = 1; i < list->size(); ++i) {
        if ((*list)[i].id == (*list)[i - 1].id) {
          throw IntegrityError("image '" + im.image_id + "': duplicate object id " +
                               std::to_string((*list)[i].id));
        }
      }
    }
  }
  return out;
}

std::vector<SegmentationItem> read_manifest(const fs::path& path) {
  const std::string text = read_file(path);
  const fs::path base = path.parent_path();
  std::vector<SegmentationItem> out;
  for_each_json_line(text, path.string(), [&](const json& j, const std::string& where) {
    SegmentationItem it;
    it.item_id = required_string(j, "item_id", where);
    Spacing spacing;
    if (j.contains("spacing")) {
      const auto& s = j["spacing"];
      if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number() ||
          !(s[0].get<double>() > 0.0) || !(s[1].get<double>() > 0.0)) {
        throw ParseError(where + "'spacing' must be two positive numbers");
      }
      spacing = {s[0].get<double>(), s[1].get<double>()};
    }
    it.reference = read_pgm(base / required_string(j, "reference", where), spacing);
    it.prediction = read_pgm(base / required_string(j, "prediction", where), spacing);
    if (!it.reference.same_shape(it.prediction)) {
      throw IntegrityError(where + "item '" + it.item_id + "': reference and prediction sizes differ");
    }
    it.meta = parse_meta(j, where);
    out.push_back(std::move(it));
  });
  std::sort(out.begin(), out.end(),
            [](const SegmentationItem& a, const SegmentationItem& b) { return a.item_id < b.item_id; });
  for (size_t i = 1; i < out.size(); ++i) {
    if (out[i].item_id == out[i - 1].item_id) {
      throw IntegrityError(path.string() + ": duplicate item_id '" + out[i].item_id + "'");
    }
  }
  return out;
}

Dataset load_dataset(const InputPaths& paths, Task task, std::optional<int> num_classes) {
  auto need = [&](const fs::path& p, const char* name) {
    if (p.empty()) {
      throw IoError(std::string("input '") + name + "' is required for task " + std::string(to_string(task)));
    }
  };
  Dataset ds;
  ds.task = task;
  int inferred = 2;
  switch (task) {
    case Task::ImLC: {
      need(paths.classification, "classification");
      auto table = read_classification_csv(paths.classification);
      if (table.num_classes > 0) {
        inferred = table.num_classes;
        if (num_classes && *num_classes != table.num_classes) {
          throw IntegrityError("num_classes " + std::to_string(*num_classes) + " but the table has " +
                               std::to_string(table.num_classes) + " score columns");
        }
      } else {
        for (const auto& it : table.items) {
          inferred = std::max({inferred, it.ref_class + 1, it.pred_class.value_or(0) + 1});
        }
      }
      ds.classification = std::move(table.items);
      break;
    }
    case Task::SemS:
    case Task::InS: {
      need(paths.manifest, "manifest");
      ds.segmentation = read_manifest(paths.manifest);
      if (task == Task::SemS) {
        for (const auto& it : ds.segmentation) {
          for (const auto* m : {&it.reference, &it.prediction}) {
            const auto labels = m->labels();
            if (!labels.empty()) inferred = std::max(inferred, labels.back() + 1);
          }
        }
      }
      break;
    }
    case Task::ObD: {
      need(paths.references, "references");
      need(paths.predictions, "predictions");
      need(paths.images, "images");
      MaskCache masks;
      auto refs = read_detections_jsonl(paths.references, masks);
      auto preds = read_detections_jsonl(paths.predictions, masks);
      for (const auto* list : {&refs, &preds}) {
        for (const auto& o : *list) {
          if (o.class_id < 0) throw IntegrityError("negative class id on image '" + o.image_id + "'");
          inferred = std::max(inferred, o.class_id + 1);
        }
      }
      ds.detection = assemble_detection(read_images_jsonl(paths.images), std::move(refs), std::move(preds));
      break;
    }
  }
  if (num_classes) {
    if (*num_classes < inferred && task != Task::InS) {
      throw IntegrityError("data contains class ids up to " + std::to_string(inferred - 1) +
                           " but num_classes is " + std::to_string(*num_classes));
    }
    inferred = *num_classes;
  }
  ds.num_classes = inferred;
  return ds;
}

}  // namespace valmet
