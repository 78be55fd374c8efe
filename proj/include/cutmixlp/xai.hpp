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

// Explanation heatmaps -> binary class masks.
//
// Heatmaps (CAM, Grad-CAM, DeepLift, ...) are produced outside this library
// by a pretrained network and imported as L x H x W float tensors in [0, 1].

#pragma once

#include <cstdint>
#include <vector>

#include "cutmixlp/raster.hpp"

namespace cutmixlp {

inline constexpr double kDefaultTCam = 0.1;
inline constexpr std::int64_t kDefaultTMap = 10;

/// Plane l is (heat_l >= t_cam) when the label marks class l + 1 present and
/// all zero otherwise.
MaskStack threshold_heatmaps(const Heatmap& heatmap, const MultiLabel& label, double t_cam);

/// Number of ones per plane.
std::vector<std::int64_t> mask_stats(const MaskStack& masks);

}  // namespace cutmixlp
