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

#include "cutmixlp/xai.hpp"

#include <numeric>

namespace cutmixlp {

MaskStack threshold_heatmaps(const Heatmap& heatmap, const MultiLabel& label, double t_cam) {
  if (!(t_cam >= 0.0 && t_cam <= 1.0)) throw ContractError("t_cam must lie in [0, 1]");
  if (heatmap.num_classes() != label.num_classes()) {
    throw ContractError("heatmap has " + std::to_string(heatmap.num_classes()) +
                        " planes but the label has " + std::to_string(label.num_classes()) +
                        " classes");
  }
  MaskStack masks(heatmap.num_classes(), heatmap.height(), heatmap.width());
  for (int p = 0; p < heatmap.num_classes(); ++p) {
    if (!label.has(static_cast<ClassId>(p + 1))) continue;
    const auto heat = heatmap.plane(p);
    auto out = masks.plane(p);
    for (std::size_t i = 0; i < heat.size(); ++i) {
      out[i] = static_cast<double>(heat[i]) >= t_cam ? 1 : 0;
    }
  }
  return masks;
}

std::vector<std::int64_t> mask_stats(const MaskStack& masks) {
  std::vector<std::int64_t> counts;
  counts.reserve(static_cast<std::size_t>(masks.num_classes()));
  for (int p = 0; p < masks.num_classes(); ++p) {
    const auto plane = masks.plane(p);
    counts.push_back(std::accumulate(plane.begin(), plane.end(), std::int64_t{0}));
  }
  return counts;
}

}  // namespace cutmixlp
