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

#include "cutmixlp/box_ops.hpp"

namespace cutmixlp {

Raster<std::uint8_t> binary_mask(const Box& box, int height, int width) {
  check_box(box, height, width);
  Raster<std::uint8_t> mask(1, height, width, 0);
  for (int r = box.row0; r < box.row1; ++r) {
    auto row = mask.row(0, r);
    std::fill(row.begin() + box.col0, row.begin() + box.col1, std::uint8_t{1});
  }
  return mask;
}

void check_same_size(const Box& a, const Box& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw ContractError("boxes " + to_string(a) + " and " + to_string(b) + " differ in size");
  }
}

ImageRaster shift_box_content(const ImageRaster& src, const Box& src_box, const Box& dst_box) {
  return std::visit(
      [&](const auto& raster) { return ImageRaster(shift_box_content(raster, src_box, dst_box)); },
      src.storage());
}

std::vector<std::string> PairReport::messages() const {
  std::vector<std::string> out;
  for (ClassId cls : unlabeled) {
    out.push_back("class " + std::to_string(cls) + " unlabeled at image level");
  }
  for (ClassId cls : missing) {
    out.push_back("class " + std::to_string(cls) + " has no pixels");
  }
  return out;
}

PairReport validate_pair(const RefMap& map, const MultiLabel& label) {
  const int num_classes = label.num_classes();
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(num_classes) + 1, 0);
  for (ClassId v : map.data()) {
    if (v > num_classes) {
      throw ContractError("map class " + std::to_string(v) + " exceeds class count " +
                          std::to_string(num_classes));
    }
    seen[v] = 1;
  }
  PairReport report;
  for (int cls = 1; cls <= num_classes; ++cls) {
    const bool labeled = label.has(static_cast<ClassId>(cls));
    if (seen[cls] && !labeled) report.unlabeled.push_back(static_cast<ClassId>(cls));
    if (!seen[cls] && labeled) report.missing.push_back(static_cast<ClassId>(cls));
  }
  return report;
}

}  // namespace cutmixlp
