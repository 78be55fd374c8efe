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

// Reference-map corruption generators.
//
// Six kinds of map noise, each applied to a fraction f of a dataset's maps:
//
//   mask_shift          translate the map by 1..max_shift pixels in one of
//                       the 8 compass directions; exposed border becomes void
//   dilation_erosion    grow or shrink one class with a 3x3 cross, k times
//   rectify_borders     nearest-neighbour down- and upsample by a factor
//   border_deformation  drop boxes on the map; a box touching two or more
//                       classes is filled with one of them
//   segment_swap        move one 4-connected segment to a random blob
//                       elsewhere in the map
//   class_swap          relabel a fraction f of all segments in the dataset
//
// Every kernel is a pure function of its inputs and an RngStream and reports
// the parameters it drew so that runs can be audited from the manifest.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutmixlp/cutmix.hpp"
#include "cutmixlp/raster.hpp"
#include "cutmixlp/rng.hpp"

namespace cutmixlp {

enum class NoiseKind {
  kMaskShift,
  kDilationErosion,
  kRectifyBorders,
  kBorderDeformation,
  kSegmentSwap,
  kClassSwap,
};

const char* to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& name);

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kMaskShift;
  /// Fraction of maps (or, for class_swap, of segments) to corrupt.
  double fraction = 0.0;
  /// Max shift in pixels, morphology iterations, downsample factor or box
  /// count, depending on kind. Ignored by segment_swap and class_swap.
  int magnitude = 1;

  void validate() const;
};

/// CLI default magnitude per kind: shift 12 px, 12 iterations, factor 4,
/// 3 boxes; 0 for kinds without one.
int default_magnitude(NoiseKind kind);

struct NoiseResult {
  RefMap map;
  nlohmann::json params;
};

/// Compass directions, clockwise from north.
enum class Direction { kN, kNE, kE, kSE, kS, kSW, kW, kNW };
const char* to_string(Direction direction);

/// Content moves by (rows, cols); exposed pixels become void.
RefMap translate_map(const RefMap& map, int drow, int dcol);

NoiseResult mask_shift(const RefMap& map, int max_shift, RngStream& rng);

RefMap dilate_class(const RefMap& map, ClassId cls, int iterations);
/// Eroded pixels take the majority nonvoid class among their 4-neighbours
/// (lowest id on ties, void when there is none).
RefMap erode_class(const RefMap& map, ClassId cls, int iterations);

/// Picks one present class and dilates or erodes it (fair coin).
NoiseResult dilate_erode(const RefMap& map, int iterations, RngStream& rng);

/// Output is constant on factor x factor blocks, each holding its top-left
/// source pixel.
RefMap rectify_borders(const RefMap& map, int factor);

NoiseResult border_deformation(const RefMap& map, int n_boxes, RngStream& rng);

NoiseResult segment_swap(const RefMap& map, RngStream& rng);

struct SegmentChange {
  std::size_t map_index = 0;
  ClassId old_class = kVoid;
  ClassId new_class = kVoid;
  std::int64_t pixels = 0;
};

struct ClassSwapResult {
  std::vector<RefMap> maps;
  std::vector<MultiLabel> labels;
  std::vector<SegmentChange> changes;
  std::int64_t total_segments = 0;
};

/// Relabels floor(f * total segments) segments to a uniformly drawn different
/// class. Labels of touched maps are read out again from the corrupted maps;
/// untouched maps keep their labels.
ClassSwapResult class_swap(const std::vector<RefMap>& maps, const std::vector<MultiLabel>& labels,
                           double fraction, RngStream& rng);

struct NoiseManifestEntry {
  std::string id;
  NoiseKind kind;
  nlohmann::json params;
};

struct NoiseSuiteResult {
  std::vector<MapRecord> records;
  std::vector<NoiseManifestEntry> manifest;
};

/// floor(f * n) with a small tolerance for binary fractions like 0.29 * 100.
std::size_t exact_fraction_count(double fraction, std::size_t n);

/// Corrupts exactly floor(f * N) maps chosen by a seeded shuffle. Per-map
/// streams are keyed by (seed, map id) so results do not depend on `workers`.
NoiseSuiteResult apply_noise_suite(const std::vector<MapRecord>& records, const NoiseSpec& spec,
                                   std::uint64_t seed, int workers = 1);

nlohmann::json to_json(const NoiseManifestEntry& entry);

struct IouReport {
  std::vector<std::pair<ClassId, double>> per_class;
  double mean = 1.0;
};

/// Per-class IoU over classes present in either map; mean over those classes
/// (1.0 when both maps are entirely void).
IouReport map_iou(const RefMap& clean, const RefMap& noisy);

/// Average of map_iou(...).mean over aligned record lists.
double mean_dataset_iou(const std::vector<MapRecord>& clean, const std::vector<MapRecord>& noisy);

}  // namespace cutmixlp
