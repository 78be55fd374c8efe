// Copyright 2026 The cutmix-lp Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cutmixlp/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cutmixlp/box_ops.hpp"
#include "cutmixlp/tensor_io.hpp"
#include "cutmixlp/xai.hpp"

namespace cutmixlp {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "cutmixlp-dataset/1";

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

fs::path resolve(const fs::path& root, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : root / path;
}

}  // namespace

void check_sample_id(const std::string& id) {
  if (id.empty() || id == "." || id == ".." ||
      !std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
      })) {
    throw DatasetError("sample id '" + id + "' must be non-empty and use only [A-Za-z0-9._-]");
  }
}

std::vector<std::pair<std::string, MultiLabel>> read_label_file(const fs::path& path,
                                                                int num_classes) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open label file " + path.string());
  std::vector<std::pair<std::string, MultiLabel>> out;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    const auto where = [&] { return path.string() + ":" + std::to_string(line_no) + ": "; };
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') {
      continue;
    }
    std::istringstream fields(line);
    std::string id;
    fields >> id;
    MultiLabel label(num_classes);
    std::string token;
    long previous = 0;
    while (fields >> token) {
      long cls = 0;
      try {
        std::size_t used = 0;
        cls = std::stol(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw DatasetError(where() + "'" + token + "' is not a class id");
      }
      if (cls < 1 || cls > num_classes) {
        throw DatasetError(where() + "class " + token + " outside 1.." + std::to_string(num_classes));
      }
      if (cls <= previous) throw DatasetError(where() + "class ids must be strictly ascending");
      previous = cls;
      label.set(static_cast<ClassId>(cls));
    }
    out.emplace_back(id, std::move(label));
  }
  return out;
}

void write_label_file(const fs::path& path,
                      const std::vector<std::pair<std::string, MultiLabel>>& labels) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot write " + path.string());
  for (const auto& [id, label] : labels) {
    out << id;
    for (ClassId cls : label.classes()) out << ' ' << cls;
    out << '\n';
  }
}

DatasetManifest parse_manifest(const fs::path& manifest_path) {
  const std::string text = read_text(manifest_path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DatasetError(manifest_path.string() + ":" + std::to_string(line_of(text, e.byte)) +
                       ": " + e.what());
  }

  DatasetManifest manifest;
  try {
    if (doc.contains("format") && doc.at("format").get<std::string>() != kFormatTag) {
      throw DatasetError("unsupported manifest format '" + doc.at("format").get<std::string>() + "'");
    }
    const fs::path base = manifest_path.parent_path();
    manifest.root = doc.contains("root") ? resolve(base, doc.at("root").get<std::string>()) : base;
    manifest.num_classes = doc.at("num_classes").get<int>();
    if (manifest.num_classes < 1 || manifest.num_classes > 65535) {
      throw DatasetError("num_classes must be in 1..65535");
    }
    if (doc.contains("class_names")) {
      manifest.class_names = doc.at("class_names").get<std::vector<std::string>>();
      if (static_cast<int>(manifest.class_names.size()) != manifest.num_classes) {
        throw DatasetError("class_names has " + std::to_string(manifest.class_names.size()) +
                           " entries for " + std::to_string(manifest.num_classes) + " classes");
      }
    } else {
      for (int i = 1; i <= manifest.num_classes; ++i) {
        manifest.class_names.push_back("class_" + std::to_string(i));
      }
    }
    const auto& geometry = doc.at("geometry");
    manifest.geometry = {geometry.at("channels").get<int>(), geometry.at("height").get<int>(),
                         geometry.at("width").get<int>(),
                         parse_dtype(geometry.value("dtype", std::string("u8")))};
    if (manifest.geometry.channels < 1 || manifest.geometry.height < 1 ||
        manifest.geometry.width < 1) {
      throw DatasetError("geometry dimensions must be positive");
    }

    const auto labels = read_label_file(resolve(manifest.root, doc.at("labels").get<std::string>()),
                                        manifest.num_classes);
    std::map<std::string, MultiLabel> by_id;
    for (const auto& [id, label] : labels) {
      if (!by_id.emplace(id, label).second) throw DatasetError("duplicate label record for '" + id + "'");
    }

    std::set<std::string> seen;
    for (const auto& entry : doc.at("samples")) {
      SampleRecord record;
      record.id = entry.at("id").get<std::string>();
      check_sample_id(record.id);
      if (!seen.insert(record.id).second) throw DatasetError("duplicate sample id '" + record.id + "'");
      record.image = resolve(manifest.root, entry.at("image").get<std::string>());
      if (entry.contains("map")) record.map = resolve(manifest.root, entry.at("map").get<std::string>());
      if (entry.contains("heatmap")) {
        record.heatmap = resolve(manifest.root, entry.at("heatmap").get<std::string>());
      }
      if (entry.contains("masks")) {
        record.masks = resolve(manifest.root, entry.at("masks").get<std::string>());
      }
      const auto label = by_id.find(record.id);
      if (label == by_id.end()) throw DatasetError("sample '" + record.id + "' has no label record");
      record.label = label->second;
      manifest.samples.push_back(std::move(record));
    }
  } catch (const json::exception& e) {
    throw DatasetError(manifest_path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw DatasetError(manifest_path.string() + ": " + e.what());
  }
  if (manifest.samples.empty()) throw DatasetError(manifest_path.string() + ": no samples");
  return manifest;
}

InMemorySource::InMemorySource(std::vector<Sample> samples, int num_classes)
    : samples_(std::move(samples)), num_classes_(num_classes) {
  if (samples_.empty()) throw DatasetError("no samples");
  for (const auto& s : samples_) {
    if (s.label.num_classes() != num_classes_) {
      throw DatasetError("sample '" + s.id + "' has " + std::to_string(s.label.num_classes()) +
                         " label entries, expected " + std::to_string(num_classes_));
    }
  }
}

RefMap Dataset::read_map(const SampleRecord& record) const {
  RefMap map = load_map_file(*record.map);
  const auto& g = manifest_.geometry;
  if (map.height() != g.height || map.width() != g.width) {
    throw DatasetError("sample '" + record.id + "': map is " + std::to_string(map.height()) + "x" +
                       std::to_string(map.width()) + ", expected " + std::to_string(g.height) +
                       "x" + std::to_string(g.width));
  }
  if (map.max_class() > manifest_.num_classes) {
    throw DatasetError("sample '" + record.id + "': map holds class " +
                       std::to_string(map.max_class()) + " but the dataset has " +
                       std::to_string(manifest_.num_classes) + " classes");
  }
  return map;
}

std::optional<MaskStack> Dataset::read_masks(const SampleRecord& record) const {
  const auto& g = manifest_.geometry;
  auto check = [&](const auto& planes, const char* what) {
    if (planes.planes() != manifest_.num_classes || planes.height() != g.height ||
        planes.width() != g.width) {
      throw DatasetError("sample '" + record.id + "': " + what + " shape does not match L x H x W");
    }
  };
  if (record.masks) {
    auto masks = masks_from_tensor(read_tensor_file(*record.masks));
    check(masks, "mask stack");
    // Absent classes never keep activations.
    for (int p = 0; p < masks.num_classes(); ++p) {
      if (!record.label.has(static_cast<ClassId>(p + 1))) {
        auto plane = masks.plane(p);
        std::fill(plane.begin(), plane.end(), std::uint8_t{0});
      }
    }
    return masks;
  }
  if (record.heatmap) {
    const auto heatmap = heatmap_from_tensor(read_tensor_file(*record.heatmap));
    check(heatmap, "heatmap");
    return threshold_heatmaps(heatmap, record.label, options_.t_cam);
  }
  return std::nullopt;
}

Dataset Dataset::load(const fs::path& manifest_path, LoadOptions options) {
  Dataset dataset(parse_manifest(manifest_path), options);
  const auto& g = dataset.manifest_.geometry;
  for (const auto& record : dataset.manifest_.samples) {
    try {
      const auto image = load_image_file(record.image);
      if (image.channels() != g.channels || image.height() != g.height ||
          image.width() != g.width || image.dtype() != g.dtype) {
        throw DatasetError("sample '" + record.id + "': image geometry does not match the manifest");
      }
      if (record.map) {
        const auto report = validate_pair(dataset.read_map(record), record.label);
        for (const auto& message : report.messages()) {
          dataset.warnings_.push_back(record.id + ": " + message);
        }
      }
      dataset.read_masks(record);
    } catch (const DatasetError&) {
      throw;
    } catch (const Error& e) {
      throw DatasetError("sample '" + record.id + "': " + e.what());
    }
  }
  return dataset;
}

Sample Dataset::get(std::size_t index) const {
  const auto& record = manifest_.samples.at(index);
  Sample sample{record.id, load_image_file(record.image), record.label, std::nullopt, std::nullopt};
  if (record.map) sample.map = read_map(record);
  sample.masks = read_masks(record);
  return sample;
}

bool Dataset::has_maps() const {
  return std::all_of(manifest_.samples.begin(), manifest_.samples.end(),
                     [](const SampleRecord& r) { return r.map.has_value(); });
}

bool Dataset::has_masks() const {
  return std::all_of(manifest_.samples.begin(), manifest_.samples.end(),
                     [](const SampleRecord& r) { return r.masks || r.heatmap; });
}

std::vector<MapRecord> Dataset::map_records() const {
  std::vector<MapRecord> out;
  for (const auto& record : manifest_.samples) {
    if (record.map) out.push_back({record.id, read_map(record), record.label});
  }
  return out;
}

// -------------------------------------------------------------------- writer

DatasetWriter::DatasetWriter(fs::path dir, int num_classes, Geometry geometry,
                             std::vector<std::string> class_names)
    : dir_(std::move(dir)),
      num_classes_(num_classes),
      geometry_(geometry),
      class_names_(std::move(class_names)) {
  fs::create_directories(dir_ / "images");
}

void DatasetWriter::add(const std::string& id, const ImageRaster& image, const MultiLabel& label,
                        const RefMap* map, const MaskStack* masks) {
  check_sample_id(id);
  SampleRecord record{id, fs::path("images") / (id + ".rten"), std::nullopt, std::nullopt,
                      std::nullopt, label};
  write_tensor_file(dir_ / record.image, to_tensor(image));
  if (map != nullptr) {
    fs::create_directories(dir_ / "maps");
    record.map = fs::path("maps") / (id + ".rten");
    write_tensor_file(dir_ / *record.map, to_tensor(*map));
  }
  if (masks != nullptr) {
    fs::create_directories(dir_ / "masks");
    record.masks = fs::path("masks") / (id + ".rten");
    write_tensor_file(dir_ / *record.masks, to_tensor(*masks));
  }
  records_.push_back(std::move(record));
}

void DatasetWriter::add_with_image_path(const std::string& id, const fs::path& image,
                                        const MultiLabel& label, const RefMap* map) {
  check_sample_id(id);
  fs::path stored = fs::absolute(image).lexically_relative(fs::absolute(dir_));
  if (stored.empty()) stored = fs::absolute(image);
  SampleRecord record{id, stored, std::nullopt, std::nullopt, std::nullopt, label};
  if (map != nullptr) {
    fs::create_directories(dir_ / "maps");
    record.map = fs::path("maps") / (id + ".rten");
    write_tensor_file(dir_ / *record.map, to_tensor(*map));
  }
  records_.push_back(std::move(record));
}

void DatasetWriter::finish() {
  json doc;
  doc["format"] = kFormatTag;
  doc["num_classes"] = num_classes_;
  if (!class_names_.empty()) doc["class_names"] = class_names_;
  doc["geometry"] = {{"channels", geometry_.channels},
                     {"height", geometry_.height},
                     {"width", geometry_.width},
                     {"dtype", to_string(geometry_.dtype)}};
  doc["labels"] = "labels.txt";
  json samples = json::array();
  std::vector<std::pair<std::string, MultiLabel>> labels;
  for (const auto& r : records_) {
    json entry = {{"id", r.id}, {"image", r.image.generic_string()}};
    if (r.map) entry["map"] = r.map->generic_string();
    if (r.masks) entry["masks"] = r.masks->generic_string();
    samples.push_back(std::move(entry));
    labels.emplace_back(r.id, r.label);
  }
  doc["samples"] = std::move(samples);
  std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot write " + (dir_ / "manifest.json").string());
  out << doc.dump(2) << '\n';
  write_label_file(dir_ / "labels.txt", labels);
}

}  // namespace cutmixlp
