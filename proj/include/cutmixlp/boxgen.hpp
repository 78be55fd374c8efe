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
#include <string>
#include <vector>

#include "cutmixlp/raster.hpp"
#include "cutmixlp/rng.hpp"

namespace cutmixlp {

/// Allowed box area as a fraction of the image area, inclusive on both ends.
struct BoxSizeRange {
  double min_area = 0.3;
  double max_area = 0.7;

  /// Throws ConfigError unless 0 < min_area <= max_area <= 1.
  void validate() const;
  friend bool operator==(const BoxSizeRange&, const BoxSizeRange&) = default;
};

/// Parses "0.3-0.7" or "0.3,0.7".
BoxSizeRange parse_box_range(const std::string& text);
std::string to_string(const BoxSizeRange& range);

inline constexpr std::int64_t kMaxBoxDraws = 1'000'000;

/// Box area over image area; the quantity the range constrains.
double normalized_area(const Box& box, int height, int width);

/// True if some integer rectangle fitting in height x width has a normalized
/// area inside the range.
bool box_range_feasible(const BoxSizeRange& range, int height, int width);

/// Draws `count` boxes by rejection: corners uniform on [0, H] x [0, W],
/// ordered, kept iff the normalized area lies in the range. Throws ConfigError
/// for invalid or infeasible ranges and when kMaxBoxDraws draws do not
/// produce enough boxes.
std::vector<Box> gen_boxes(const BoxSizeRange& range, int count, int height, int width,
                           RngStream& rng);

/// Same-sized box with its top-left corner uniform over all valid positions.
Box sample_partner_box(const Box& box, int height, int width, RngStream& rng);

}  // namespace cutmixlp
