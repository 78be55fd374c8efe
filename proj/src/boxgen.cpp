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

#include "cutmixlp/boxgen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cutmixlp {

void BoxSizeRange::validate() const {
  if (!(min_area > 0.0 && min_area <= max_area && max_area <= 1.0)) {
    throw ConfigError("invalid box size range " + to_string(*this) +
                      " (need 0 < min <= max <= 1)");
  }
}

BoxSizeRange parse_box_range(const std::string& text) {
  const auto sep = text.find_first_of("-,:");
  if (sep == std::string::npos || sep == 0) {
    throw ConfigError("box range '" + text + "' must look like 0.3-0.7");
  }
  BoxSizeRange range;
  try {
    std::size_t used = 0;
    range.min_area = std::stod(text.substr(0, sep), &used);
    range.max_area = std::stod(text.substr(sep + 1), &used);
  } catch (const std::exception&) {
    throw ConfigError("box range '" + text + "' is not numeric");
  }
  range.validate();
  return range;
}

std::string to_string(const BoxSizeRange& range) {
  std::ostringstream os;
  os << range.min_area << "-" << range.max_area;
  return os.str();
}

double normalized_area(const Box& box, int height, int width) {
  return static_cast<double>(box.area()) /
         (static_cast<double>(height) * static_cast<double>(width));
}

namespace {

bool in_range(const BoxSizeRange& range, std::int64_t area, int height, int width) {
  const double a = static_cast<double>(area) /
                   (static_cast<double>(height) * static_cast<double>(width));
  return range.min_area <= a && a <= range.max_area;
}

}  // namespace

bool box_range_feasible(const BoxSizeRange& range, int height, int width) {
  const double total = static_cast<double>(height) * width;
  for (int h = 1; h <= height; ++h) {
    // Smallest width reaching min_area, give or take rounding.
    const auto w_guess = static_cast<int>(std::ceil(range.min_area * total / h));
    for (int w = std::max(1, w_guess - 1); w <= std::min(width, w_guess + 1); ++w) {
      if (in_range(range, static_cast<std::int64_t>(h) * w, height, width)) return true;
    }
  }
  return false;
}

std::vector<Box> gen_boxes(const BoxSizeRange& range, int count, int height, int width,
                           RngStream& rng) {
  range.validate();
  if (count < 1) throw ConfigError("gen_boxes: box count must be at least 1");
  if (height <= 0 || width <= 0) throw ContractError("gen_boxes: image size must be positive");
  if (!box_range_feasible(range, height, width)) {
    throw ConfigError("box size range " + to_string(range) + " admits no box in a " +
                      std::to_string(height) + "x" + std::to_string(width) + " image");
  }

  std::vector<Box> boxes;
  boxes.reserve(static_cast<std::size_t>(count));
  std::int64_t draws = 0;
  while (static_cast<int>(boxes.size()) < count) {
    if (draws++ == kMaxBoxDraws) {
      std::ostringstream os;
      os << "gen_boxes: " << kMaxBoxDraws << " draws produced only " << boxes.size() << " of "
         << count << " boxes for range " << to_string(range) << " in a " << height << "x"
         << width << " image";
      throw ConfigError(os.str());
    }
    const auto ra = static_cast<int>(rng.uniform_int(0, height));
    const auto rc = static_cast<int>(rng.uniform_int(0, height));
    const auto rb = static_cast<int>(rng.uniform_int(0, width));
    const auto rd = static_cast<int>(rng.uniform_int(0, width));
    const Box box{std::min(ra, rc), std::min(rb, rd), std::max(ra, rc), std::max(rb, rd)};
    if (in_range(range, box.area(), height, width)) boxes.push_back(box);
  }
  return boxes;
}

Box sample_partner_box(const Box& box, int height, int width, RngStream& rng) {
  check_box(box, height, width);
  const auto row0 = static_cast<int>(rng.uniform_int(0, height - box.height()));
  const auto col0 = static_cast<int>(rng.uniform_int(0, width - box.width()));
  return {row0, col0, row0 + box.height(), col0 + box.width()};
}

}  // namespace cutmixlp
