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

#pragma once

#include <cstdint>
#include <vector>

#include "cutmixlp/raster.hpp"

namespace cutmixlp {

struct Segment {
  ClassId cls = kVoid;
  std::int64_t pixels = 0;
};

/// 4-connected components of equal nonvoid class id.
struct SegmentLabels {
  /// Segment index per pixel, -1 on void.
  Raster<std::int32_t> index;
  std::vector<Segment> segments;
};

/// Segments are numbered in raster order of their first pixel.
SegmentLabels label_segments(const RefMap& map);

/// Distinct nonvoid classes present, ascending.
std::vector<ClassId> present_classes(const RefMap& map);

}  // namespace cutmixlp
