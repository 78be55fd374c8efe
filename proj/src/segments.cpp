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

#include "cutmixlp/segments.hpp"

#include <algorithm>

namespace cutmixlp {

SegmentLabels label_segments(const RefMap& map) {
  const int height = map.height();
  const int width = map.width();
  SegmentLabels out{Raster<std::int32_t>(1, height, width, -1), {}};
  std::vector<std::pair<int, int>> stack;

  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const ClassId cls = map.at(r, c);
      if (cls == kVoid || out.index.at(0, r, c) >= 0) continue;

      const auto id = static_cast<std::int32_t>(out.segments.size());
      Segment segment{cls, 0};
      out.index.at(0, r, c) = id;
      stack.assign(1, {r, c});
      while (!stack.empty()) {
        const auto [y, x] = stack.back();
        stack.pop_back();
        ++segment.pixels;
        constexpr int kDy[] = {-1, 1, 0, 0};
        constexpr int kDx[] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
          const int ny = y + kDy[k];
          const int nx = x + kDx[k];
          if (ny < 0 || ny >= height || nx < 0 || nx >= width) continue;
          if (map.at(ny, nx) != cls || out.index.at(0, ny, nx) >= 0) continue;
          out.index.at(0, ny, nx) = id;
          stack.emplace_back(ny, nx);
        }
      }
      out.segments.push_back(segment);
    }
  }
  return out;
}

std::vector<ClassId> present_classes(const RefMap& map) {
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(map.max_class()) + 1, 0);
  for (ClassId v : map.data()) seen[v] = 1;
  std::vector<ClassId> out;
  for (std::size_t cls = 1; cls < seen.size(); ++cls) {
    if (seen[cls]) out.push_back(static_cast<ClassId>(cls));
  }
  return out;
}

}  // namespace cutmixlp
