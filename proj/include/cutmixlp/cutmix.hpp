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

// CutMix pairing with label propagation.
//
// Two samples are combined by erasing box1 from the first and filling it with
// the same-sized box2 cut from the second. The augmented label comes from one
// of three policies:
//
//   naive   area-weighted mix of the two image-level labels (soft label);
//   lp_map  the reference maps are paired the same way as the images and the
//           label is read out as the set of classes left on the paired map;
//   lp_xai  the per-class explanation masks are paired plane by plane and a
//           class is present iff its paired mask keeps more than t_map
//           activating pixels.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "cutmixlp/boxgen.hpp"
#include "cutmixlp/raster.hpp"
#include "cutmixlp/rng.hpp"

namespace cutmixlp {

enum class LabelPolicy { kNaive, kLpMap, kLpXai };

const char* to_string(LabelPolicy policy);
LabelPolicy parse_policy(const std::string& name);

struct LpConfig {
  LabelPolicy policy = LabelPolicy::kLpMap;
  /// Minimum activating pixel count for lp_xai; a class needs strictly more.
  std::int64_t t_map = 10;
  /// Applies t_map to reference-map read-out as well (off by default).
  bool smooth_map_readout = false;
  /// Replacement probability; consumed by the batch pipeline.
  double p = 0.5;

  void validate() const;
};

struct Sample {
  std::string id;
  ImageRaster image;
  MultiLabel label;
  std::optional<RefMap> map;
  std::optional<MaskStack> masks;
};

/// Reference map plus image-level label, without the image.
struct MapRecord {
  std::string id;
  RefMap map;
  MultiLabel label;

  friend bool operator==(const MapRecord&, const MapRecord&) = default;
};

struct Provenance {
  std::string first_id;
  std::string second_id;
  Box box1;  // erased from the first sample
  Box box2;  // cut from the second sample
  /// The propagated label came out empty (both surviving regions void).
  bool empty_label = false;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

using AnyLabel = std::variant<MultiLabel, SoftLabel>;

struct AugmentedSample {
  ImageRaster image;
  AnyLabel label;
  /// Paired whenever both samples carry one, whatever the policy.
  std::optional<RefMap> map;
  std::optional<MaskStack> masks;
  Provenance provenance;
};

ImageRaster compose_image(const ImageRaster& first, const ImageRaster& second, const Box& box1,
                          const Box& box2);

/// (1 - A) * first + A * second, A = box area / image area.
SoftLabel naive_label(const MultiLabel& first, const MultiLabel& second, const Box& box, int height,
                      int width);

RefMap compose_map(const RefMap& first, const RefMap& second, const Box& box1, const Box& box2);

/// Classes occurring on the map. With min_pixels set, a class needs strictly
/// more than that many pixels. Void is never reported.
MultiLabel readout_phi(const RefMap& map, int num_classes,
                       std::optional<std::int64_t> min_pixels = std::nullopt);

MaskStack compose_masks(const MaskStack& first, const MaskStack& second, const Box& box1,
                        const Box& box2);

/// Class l present iff plane l holds strictly more than t_map ones.
MultiLabel readout_psi(const MaskStack& masks, std::int64_t t_map);

/// Draws box1 from `range`, box2 as its unaligned partner, and pairs the two
/// samples under config.policy. Throws ConfigError when the samples lack the
/// auxiliary data the policy needs.
AugmentedSample augment(const Sample& first, const Sample& second, const LpConfig& config,
                        const BoxSizeRange& range, RngStream& rng);

/// Pairing with explicit boxes; augment() is draw boxes + this.
AugmentedSample augment_with_boxes(const Sample& first, const Sample& second,
                                   const LpConfig& config, const Box& box1, const Box& box2);

}  // namespace cutmixlp
