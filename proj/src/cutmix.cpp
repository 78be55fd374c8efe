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

#include "cutmixlp/cutmix.hpp"

#include <vector>

#include "cutmixlp/box_ops.hpp"

namespace cutmixlp {

const char* to_string(LabelPolicy policy) {
  switch (policy) {
    case LabelPolicy::kNaive: return "naive";
    case LabelPolicy::kLpMap: return "lp_map";
    case LabelPolicy::kLpXai: return "lp_xai";
  }
  return "?";
}

LabelPolicy parse_policy(const std::string& name) {
  if (name == "naive") return LabelPolicy::kNaive;
  if (name == "lp_map") return LabelPolicy::kLpMap;
  if (name == "lp_xai") return LabelPolicy::kLpXai;
  throw ConfigError("unknown label policy '" + name + "' (expected naive, lp_map or lp_xai)");
}

void LpConfig::validate() const {
  if (t_map < 0) throw ConfigError("t_map must be nonnegative");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
}

ImageRaster compose_image(const ImageRaster& first, const ImageRaster& second, const Box& box1,
                          const Box& box2) {
  if (first.dtype() != second.dtype()) throw ContractError("compose_image: dtype mismatch");
  return std::visit(
      [&](const auto& a) {
        using R = std::decay_t<decltype(a)>;
        return ImageRaster(paste_box(a, std::get<R>(second.storage()), box1, box2));
      },
      first.storage());
}

SoftLabel naive_label(const MultiLabel& first, const MultiLabel& second, const Box& box, int height,
                      int width) {
  if (first.num_classes() != second.num_classes()) {
    throw ContractError("naive_label: label lengths differ");
  }
  check_box(box, height, width);
  const double area = normalized_area(box, height, width);
  std::vector<double> weights(static_cast<std::size_t>(first.num_classes()));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] = (1.0 - area) * first.bits()[i] + area * second.bits()[i];
  }
  return SoftLabel(std::move(weights));
}

RefMap compose_map(const RefMap& first, const RefMap& second, const Box& box1, const Box& box2) {
  return RefMap(paste_box<Raster<ClassId>>(first, second, box1, box2));
}

MultiLabel readout_phi(const RefMap& map, int num_classes, std::optional<std::int64_t> min_pixels) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(num_classes) + 1, 0);
  for (ClassId v : map.data()) {
    if (v > num_classes) {
      throw ContractError("map class " + std::to_string(v) + " exceeds class count " +
                          std::to_string(num_classes));
    }
    ++counts[v];
  }
  const std::int64_t threshold = min_pixels.value_or(0);
  MultiLabel label(num_classes);
  for (int cls = 1; cls <= num_classes; ++cls) {
    if (counts[cls] > threshold) label.set(static_cast<ClassId>(cls));
  }
  return label;
}

MaskStack compose_masks(const MaskStack& first, const MaskStack& second, const Box& box1,
                        const Box& box2) {
  if (first.num_classes() != second.num_classes()) {
    throw ContractError("compose_masks: class counts differ");
  }
  return MaskStack(paste_box<Raster<std::uint8_t>>(first, second, box1, box2));
}

MultiLabel readout_psi(const MaskStack& masks, std::int64_t t_map) {
  if (t_map < 0) throw ContractError("readout_psi: t_map must be nonnegative");
  MultiLabel label(masks.num_classes());
  for (int p = 0; p < masks.num_classes(); ++p) {
    std::int64_t ones = 0;
    for (std::uint8_t v : masks.plane(p)) ones += v;
    if (ones > t_map) label.set(static_cast<ClassId>(p + 1));
  }
  return label;
}

namespace {

void check_pair(const Sample& first, const Sample& second, const LpConfig& config) {
  if (first.image.channels() != second.image.channels() ||
      first.image.height() != second.image.height() ||
      first.image.width() != second.image.width() || first.image.dtype() != second.image.dtype()) {
    throw ContractError("augment: samples '" + first.id + "' and '" + second.id +
                        "' differ in image geometry");
  }
  if (first.label.num_classes() != second.label.num_classes()) {
    throw ContractError("augment: samples '" + first.id + "' and '" + second.id +
                        "' differ in class count");
  }
  if (config.policy == LabelPolicy::kLpMap && (!first.map || !second.map)) {
    throw ConfigError("policy lp_map needs reference maps; sample '" +
                      (first.map ? second.id : first.id) + "' has none");
  }
  if (config.policy == LabelPolicy::kLpXai && (!first.masks || !second.masks)) {
    throw ConfigError("policy lp_xai needs explanation masks; sample '" +
                      (first.masks ? second.id : first.id) + "' has none");
  }
}

}  // namespace

AugmentedSample augment_with_boxes(const Sample& first, const Sample& second,
                                   const LpConfig& config, const Box& box1, const Box& box2) {
  check_pair(first, second, config);
  const int height = first.image.height();
  const int width = first.image.width();
  const int num_classes = first.label.num_classes();

  AugmentedSample out{compose_image(first.image, second.image, box1, box2),
                      MultiLabel(num_classes),
                      std::nullopt,
                      std::nullopt,
                      {first.id, second.id, box1, box2, false}};
  switch (config.policy) {
    case LabelPolicy::kNaive:
      out.label = naive_label(first.label, second.label, box1, height, width);
      break;
    case LabelPolicy::kLpMap: {
      out.map = compose_map(*first.map, *second.map, box1, box2);
      auto label = readout_phi(*out.map, num_classes,
                               config.smooth_map_readout ? std::optional(config.t_map)
                                                         : std::nullopt);
      out.provenance.empty_label = label.empty();
      out.label = std::move(label);
      break;
    }
    case LabelPolicy::kLpXai: {
      out.masks = compose_masks(*first.masks, *second.masks, box1, box2);
      auto label = readout_psi(*out.masks, config.t_map);
      out.provenance.empty_label = label.empty();
      out.label = std::move(label);
      break;
    }
  }
  if (!out.map && first.map && second.map) out.map = compose_map(*first.map, *second.map, box1, box2);
  if (!out.masks && first.masks && second.masks) {
    out.masks = compose_masks(*first.masks, *second.masks, box1, box2);
  }
  return out;
}

AugmentedSample augment(const Sample& first, const Sample& second, const LpConfig& config,
                        const BoxSizeRange& range, RngStream& rng) {
  check_pair(first, second, config);
  const int height = first.image.height();
  const int width = first.image.width();
  const Box box1 = gen_boxes(range, 1, height, width, rng).front();
  const Box box2 = sample_partner_box(box1, height, width, rng);
  return augment_with_boxes(first, second, config, box1, box2);
}

}  // namespace cutmixlp
