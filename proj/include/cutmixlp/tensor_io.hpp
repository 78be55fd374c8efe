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

// RTEN raw tensor files and PNG import.
//
// RTEN layout (all integers little-endian):
//
//   offset 0   4 bytes   magic "RTEN"
//          4   u8        format version (1)
//          5   u8        dtype: 0 = u8, 1 = f32
//          6   u8        rank (1..8)
//          7   rank*u32  dims, outermost first
//          .   payload   row-major samples, f32 as IEEE-754 little-endian
//
// Nothing follows the payload. Images are rank 3 (C, H, W), reference maps
// rank 2 (H, W), mask stacks rank 3 (L, H, W) u8, heatmaps rank 3 (L, H, W)
// f32. Maps are written as u8 when every id fits, otherwise as f32 holding
// exact integers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cutmixlp/raster.hpp"

namespace cutmixlp {

inline constexpr std::uint8_t kRtenVersion = 1;
inline constexpr int kRtenMaxRank = 8;

struct RawTensor {
  DType dtype = DType::kU8;
  std::vector<std::uint32_t> dims;
  std::vector<std::byte> payload;

  std::size_t element_count() const;
  friend bool operator==(const RawTensor&, const RawTensor&) = default;
};

std::vector<std::byte> encode_tensor(const RawTensor& tensor);
/// Throws FormatError with a distinct code per failure; never returns a
/// partially filled tensor.
RawTensor decode_tensor(std::span<const std::byte> bytes);

void write_tensor_file(const std::filesystem::path& path, const RawTensor& tensor);
RawTensor read_tensor_file(const std::filesystem::path& path);

RawTensor to_tensor(const ImageRaster& image);
RawTensor to_tensor(const RefMap& map);
RawTensor to_tensor(const MaskStack& masks);
RawTensor to_tensor(const Heatmap& heatmap);

ImageRaster image_from_tensor(const RawTensor& tensor);
RefMap refmap_from_tensor(const RawTensor& tensor);
MaskStack masks_from_tensor(const RawTensor& tensor);
Heatmap heatmap_from_tensor(const RawTensor& tensor);

/// 8-bit PNG with 1-4 channels (palette and low-bit-depth grey are expanded).
ImageRaster read_png_image(const std::filesystem::path& path);
/// Single-channel 8- or 16-bit PNG (grey or palette indices) as class ids.
RefMap read_png_map(const std::filesystem::path& path);

void write_png_image(const std::filesystem::path& path, const ImageRaster& image);
/// bit_depth 8 or 16.
void write_png_map(const std::filesystem::path& path, const RefMap& map, int bit_depth = 8);

/// Dispatches on extension: ".png" or RTEN otherwise.
ImageRaster load_image_file(const std::filesystem::path& path);
RefMap load_map_file(const std::filesystem::path& path);

}  // namespace cutmixlp
