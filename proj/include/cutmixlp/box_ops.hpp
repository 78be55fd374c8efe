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

// Box masks and box-to-box content moves. These are the primitives behind
// every pairing operation: erase a box from one raster, cut a same-sized box
// from another, and translate it into place.

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "cutmixlp/raster.hpp"

namespace cutmixlp {

/// 1 x H x W mask with ones exactly on the half-open box.
Raster<std::uint8_t> binary_mask(const Box& box, int height, int width);

void check_same_size(const Box& a, const Box& b);

/// Output is zero except on dst_box, which holds src's src_box content.
/// Applies to every plane.
template <class R>
R shift_box_content(const R& src, const Box& src_box, const Box& dst_box) {
  check_box(src_box, src.height(), src.width());
  check_box(dst_box, src.height(), src.width());
  check_same_size(src_box, dst_box);
  R out = src;
  std::fill(out.data().begin(), out.data().end(), typename R::value_type{});
  for (int p = 0; p < src.planes(); ++p) {
    for (int r = 0; r < src_box.height(); ++r) {
      const auto from = src.row(p, src_box.row0 + r).subspan(src_box.col0, src_box.width());
      std::copy(from.begin(), from.end(), out.row(p, dst_box.row0 + r).begin() + dst_box.col0);
    }
  }
  return out;
}

ImageRaster shift_box_content(const ImageRaster& src, const Box& src_box, const Box& dst_box);

/// (1 - B_base) * base + shift(B_donor * donor): base everywhere except
/// base_box, which receives donor's donor_box content.
template <class R>
R paste_box(const R& base, const R& donor, const Box& base_box, const Box& donor_box) {
  if (!base.same_shape(donor)) {
    throw ContractError("paste_box: rasters differ in shape");
  }
  check_box(base_box, base.height(), base.width());
  check_box(donor_box, base.height(), base.width());
  check_same_size(base_box, donor_box);
  R out = base;
  for (int p = 0; p < base.planes(); ++p) {
    for (int r = 0; r < base_box.height(); ++r) {
      const auto from = donor.row(p, donor_box.row0 + r).subspan(donor_box.col0, donor_box.width());
      std::copy(from.begin(), from.end(), out.row(p, base_box.row0 + r).begin() + base_box.col0);
    }
  }
  return out;
}

/// Consistency of a reference map with its image-level label.
struct PairReport {
  /// Classes with pixels in the map that the label does not mark present.
  std::vector<ClassId> unlabeled;
  /// Classes marked present that have no pixel in the map.
  std::vector<ClassId> missing;

  bool ok() const { return unlabeled.empty() && missing.empty(); }
  std::vector<std::string> messages() const;
};

/// Throws ContractError if the map holds a class id above the label's L.
PairReport validate_pair(const RefMap& map, const MultiLabel& label);

}  // namespace cutmixlp
