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

// Seeded synthetic datasets for tests, demos and audits.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cutmixlp/cutmix.hpp"
#include "cutmixlp/raster.hpp"

namespace cutmixlp {

struct FixtureOptions {
  int count = 100;
  int num_classes = 6;
  int height = 120;
  int width = 120;
  int channels = 3;
  std::uint64_t seed = 0;
  /// Attach mask stacks derived from synthetic heatmaps.
  bool with_masks = true;
};

/// Maps are Voronoi partitions of 4..8 sites carrying 2..min(4, L) distinct
/// classes; images are per-class colours plus uniform noise.
std::vector<Sample> make_voronoi_samples(const FixtureOptions& options);

/// Class 1 everywhere; even-indexed samples add class 2 in a top-left corner
/// rectangle covering `corner_area` of the image. L = 2.
std::vector<Sample> make_corner_samples(int count, int height, int width, double corner_area,
                                        std::uint64_t seed = 0);

/// Every map is one class covering the whole image.
std::vector<Sample> make_uniform_samples(int count, int height, int width, int num_classes,
                                         std::uint64_t seed = 0);

/// Heatmap scoring 1.0 on a class's pixels and 0.05 elsewhere, so that
/// thresholding at the default t_cam recovers the map exactly.
Heatmap heatmap_from_map(const RefMap& map, int num_classes);

/// Image-level label read out from a map.
MultiLabel label_from_map(const RefMap& map, int num_classes);

std::vector<MapRecord> to_map_records(const std::vector<Sample>& samples);

}  // namespace cutmixlp
