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

// On-disk datasets.
//
// A dataset is a JSON manifest plus a line-oriented label file:
//
//   {
//     "format": "cutmixlp-dataset/1",
//     "num_classes": 6,
//     "class_names": ["urban", "agriculture", ...],      (optional)
//     "geometry": {"channels": 3, "height": 120, "width": 120, "dtype": "u8"},
//     "labels": "labels.txt",
//     "samples": [
//       {"id": "s0000", "image": "images/s0000.rten",
//        "map": "maps/s0000.png",                         (optional)
//        "heatmap": "heatmaps/s0000.rten",                (optional)
//        "masks": "masks/s0000.rten"}                     (optional)
//     ]
//   }
//
// Relative paths resolve against the manifest's directory (or "root" when
// given). labels.txt holds one record per line, "<id> <class> <class> ...",
// class ids ascending in 1..L; blank lines and lines starting with '#' are
// ignored.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cutmixlp/cutmix.hpp"
#include "cutmixlp/raster.hpp"

namespace cutmixlp {

struct Geometry {
  int channels = 3;
  int height = 120;
  int width = 120;
  DType dtype = DType::kU8;

  friend bool operator==(const Geometry&, const Geometry&) = default;
};

struct SampleRecord {
  std::string id;
  std::filesystem::path image;
  std::optional<std::filesystem::path> map;
  std::optional<std::filesystem::path> heatmap;
  std::optional<std::filesystem::path> masks;
  MultiLabel label;
};

struct DatasetManifest {
  std::filesystem::path root;
  int num_classes = 0;
  std::vector<std::string> class_names;
  Geometry geometry;
  std::vector<SampleRecord> samples;
};

/// Parses manifest and label file without touching sample files. Errors name
/// file and line.
DatasetManifest parse_manifest(const std::filesystem::path& manifest_path);

/// Reads "<id> <class>..." records; throws DatasetError naming file:line.
std::vector<std::pair<std::string, MultiLabel>> read_label_file(const std::filesystem::path& path,
                                                                int num_classes);
void write_label_file(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, MultiLabel>>& labels);

/// Random access to samples; implementations are safe for concurrent get().
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual std::size_t size() const = 0;
  virtual int num_classes() const = 0;
  virtual Sample get(std::size_t index) const = 0;
};

class InMemorySource final : public SampleSource {
 public:
  InMemorySource(std::vector<Sample> samples, int num_classes);

  std::size_t size() const override { return samples_.size(); }
  int num_classes() const override { return num_classes_; }
  Sample get(std::size_t index) const override { return samples_.at(index); }
  const std::vector<Sample>& samples() const { return samples_; }

 private:
  std::vector<Sample> samples_;
  int num_classes_;
};

struct LoadOptions {
  /// Threshold turning heatmaps into masks.
  double t_cam = 0.1;
};

/// Manifest-backed dataset. load() reads and validates every referenced file
/// once; get() reads them again on demand.
class Dataset final : public SampleSource {
 public:
  static Dataset load(const std::filesystem::path& manifest_path, LoadOptions options = {});

  std::size_t size() const override { return manifest_.samples.size(); }
  int num_classes() const override { return manifest_.num_classes; }
  Sample get(std::size_t index) const override;

  const DatasetManifest& manifest() const { return manifest_; }
  /// Map/label inconsistencies found during load, prefixed by sample id.
  const std::vector<std::string>& warnings() const { return warnings_; }
  bool has_maps() const;
  bool has_masks() const;

  /// Maps and labels of every sample that has a map.
  std::vector<MapRecord> map_records() const;

 private:
  Dataset(DatasetManifest manifest, LoadOptions options)
      : manifest_(std::move(manifest)), options_(options) {}

  RefMap read_map(const SampleRecord& record) const;
  std::optional<MaskStack> read_masks(const SampleRecord& record) const;

  DatasetManifest manifest_;
  LoadOptions options_;
  std::vector<std::string> warnings_;
};

/// Writes a dataset directory: manifest.json, labels.txt, images/, maps/,
/// masks/ (RTEN). Sample ids must be usable as file names.
class DatasetWriter {
 public:
  DatasetWriter(std::filesystem::path dir, int num_classes, Geometry geometry,
                std::vector<std::string> class_names = {});

  void add(const std::string& id, const ImageRaster& image, const MultiLabel& label,
           const RefMap* map = nullptr, const MaskStack* masks = nullptr);
  /// Manifest entry pointing at an existing image file instead of copying it;
  /// the path is stored relative to the output directory.
  void add_with_image_path(const std::string& id, const std::filesystem::path& image,
                           const MultiLabel& label, const RefMap* map = nullptr);
  void add(const Sample& sample) {
    add(sample.id, sample.image, sample.label, sample.map ? &*sample.map : nullptr,
        sample.masks ? &*sample.masks : nullptr);
  }
  /// Writes manifest.json and labels.txt.
  void finish();

 private:
  std::filesystem::path dir_;
  int num_classes_;
  Geometry geometry_;
  std::vector<std::string> class_names_;
  std::vector<SampleRecord> records_;
};

void check_sample_id(const std::string& id);

}  // namespace cutmixlp
