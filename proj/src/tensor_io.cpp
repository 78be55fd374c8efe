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

#include "cutmixlp/tensor_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <memory>

namespace cutmixlp {
namespace {

constexpr char kMagic[4] = {'R', 'T', 'E', 'N'};

std::size_t dtype_size(DType dtype) { return dtype == DType::kU8 ? 1 : 4; }

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::span<const std::byte> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::to_integer<std::uint32_t>(bytes[at + i]) << (8 * i);
  return v;
}

std::vector<std::byte> floats_to_le(std::span<const float> values) {
  std::vector<std::byte> out(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(values[i]);
    for (int b = 0; b < 4; ++b) out[i * 4 + b] = static_cast<std::byte>((bits >> (8 * b)) & 0xFF);
  }
  return out;
}

std::vector<float> le_to_floats(std::span<const std::byte> bytes) {
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::bit_cast<float>(get_u32(bytes, i * 4));
  return out;
}

std::vector<std::uint8_t> to_u8(std::span<const std::byte> bytes) {
  std::vector<std::uint8_t> out(bytes.size());
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

std::vector<std::byte> from_u8(std::span<const std::uint8_t> values) {
  std::vector<std::byte> out(values.size());
  std::memcpy(out.data(), values.data(), values.size());
  return out;
}

void expect_shape(const RawTensor& tensor, std::size_t rank, const char* what) {
  if (tensor.dims.size() != rank) {
    throw FormatError(FormatErrc::kBadRank, std::string(what) + " expects rank " +
                                                std::to_string(rank) + ", got " +
                                                std::to_string(tensor.dims.size()));
  }
  for (auto d : tensor.dims) {
    if (d == 0 || d > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
      throw FormatError(FormatErrc::kDimOverflow, std::string(what) + " has an unusable dimension");
    }
  }
}

void expect_dtype(const RawTensor& tensor, DType dtype, const char* what) {
  if (tensor.dtype != dtype) {
    throw FormatError(FormatErrc::kBadDtype,
                      std::string(what) + " must be " + to_string(dtype));
  }
}

int dim(const RawTensor& tensor, std::size_t i) { return static_cast<int>(tensor.dims[i]); }

}  // namespace

std::size_t RawTensor::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::vector<std::byte> encode_tensor(const RawTensor& tensor) {
  if (tensor.dims.empty() || tensor.dims.size() > kRtenMaxRank) {
    throw FormatError(FormatErrc::kBadRank, "rank must be 1.." + std::to_string(kRtenMaxRank));
  }
  if (tensor.payload.size() != tensor.element_count() * dtype_size(tensor.dtype)) {
    throw FormatError(FormatErrc::kTruncatedPayload, "payload size does not match dims");
  }
  std::vector<std::byte> out;
  out.reserve(7 + 4 * tensor.dims.size() + tensor.payload.size());
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  out.push_back(static_cast<std::byte>(kRtenVersion));
  out.push_back(static_cast<std::byte>(tensor.dtype));
  out.push_back(static_cast<std::byte>(tensor.dims.size()));
  for (auto d : tensor.dims) put_u32(out, d);
  out.insert(out.end(), tensor.payload.begin(), tensor.payload.end());
  return out;
}

RawTensor decode_tensor(std::span<const std::byte> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError(FormatErrc::kBadMagic, "missing RTEN magic");
  }
  if (bytes.size() < 7) throw FormatError(FormatErrc::kTruncatedPayload, "header cut short");
  const auto version = std::to_integer<std::uint8_t>(bytes[4]);
  if (version != kRtenVersion) {
    throw FormatError(FormatErrc::kBadVersion, "version " + std::to_string(version));
  }
  const auto dtype_code = std::to_integer<std::uint8_t>(bytes[5]);
  if (dtype_code > 1) throw FormatError(FormatErrc::kBadDtype, "code " + std::to_string(dtype_code));
  const auto rank = std::to_integer<std::uint8_t>(bytes[6]);
  if (rank == 0 || rank > kRtenMaxRank) {
    throw FormatError(FormatErrc::kBadRank, "rank " + std::to_string(rank));
  }
  const std::size_t header = 7 + 4 * static_cast<std::size_t>(rank);
  if (bytes.size() < header) throw FormatError(FormatErrc::kTruncatedPayload, "dims cut short");

  RawTensor tensor;
  tensor.dtype = static_cast<DType>(dtype_code);
  std::uint64_t count = 1;
  constexpr std::uint64_t kMaxBytes = std::uint64_t{1} << 40;
  for (std::size_t i = 0; i < rank; ++i) {
    const std::uint32_t d = get_u32(bytes, 7 + 4 * i);
    tensor.dims.push_back(d);
    if (d != 0 && count > kMaxBytes / d) {
      throw FormatError(FormatErrc::kDimOverflow, "dims overflow the payload size limit");
    }
    count *= d;
  }
  const std::uint64_t payload_bytes = count * dtype_size(tensor.dtype);
  if (payload_bytes > kMaxBytes) {
    throw FormatError(FormatErrc::kDimOverflow, "dims overflow the payload size limit");
  }
  const std::size_t available = bytes.size() - header;
  if (available < payload_bytes) {
    throw FormatError(FormatErrc::kTruncatedPayload,
                      "expected " + std::to_string(payload_bytes) + " payload bytes, found " +
                          std::to_string(available));
  }
  if (available > payload_bytes) {
    throw FormatError(FormatErrc::kTrailingBytes,
                      std::to_string(available - payload_bytes) + " bytes after payload");
  }
  tensor.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
  return tensor;
}

void write_tensor_file(const std::filesystem::path& path, const RawTensor& tensor) {
  const auto bytes = encode_tensor(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(FormatErrc::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError(FormatErrc::kIo, "write failed for " + path.string());
}

RawTensor read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(FormatErrc::kIo, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_tensor(std::as_bytes(std::span<const char>(raw)));
  } catch (const FormatError& e) {
    throw FormatError(e.code(), path.string() + ": " + e.detail());
  }
}

RawTensor to_tensor(const ImageRaster& image) {
  RawTensor tensor;
  tensor.dtype = image.dtype();
  tensor.dims = {static_cast<std::uint32_t>(image.channels()),
                 static_cast<std::uint32_t>(image.height()),
                 static_cast<std::uint32_t>(image.width())};
  if (image.dtype() == DType::kU8) {
    tensor.payload = from_u8(image.as<std::uint8_t>().data());
  } else {
    tensor.payload = floats_to_le(image.as<float>().data());
  }
  return tensor;
}

RawTensor to_tensor(const RefMap& map) {
  RawTensor tensor;
  tensor.dims = {static_cast<std::uint32_t>(map.height()), static_cast<std::uint32_t>(map.width())};
  const auto values = map.data();
  if (map.max_class() <= 255) {
    tensor.dtype = DType::kU8;
    tensor.payload.resize(values.size());
    std::transform(values.begin(), values.end(), tensor.payload.begin(),
                   [](ClassId v) { return static_cast<std::byte>(v); });
  } else {
    tensor.dtype = DType::kF32;
    std::vector<float> as_float(values.begin(), values.end());
    tensor.payload = floats_to_le(as_float);
  }
  return tensor;
}

RawTensor to_tensor(const MaskStack& masks) {
  return {DType::kU8,
          {static_cast<std::uint32_t>(masks.planes()), static_cast<std::uint32_t>(masks.height()),
           static_cast<std::uint32_t>(masks.width())},
          from_u8(masks.data())};
}

RawTensor to_tensor(const Heatmap& heatmap) {
  return {DType::kF32,
          {static_cast<std::uint32_t>(heatmap.planes()), static_cast<std::uint32_t>(heatmap.height()),
           static_cast<std::uint32_t>(heatmap.width())},
          floats_to_le(heatmap.data())};
}

ImageRaster image_from_tensor(const RawTensor& tensor) {
  expect_shape(tensor, 3, "image");
  if (tensor.dtype == DType::kU8) {
    return ImageRaster(
        Raster<std::uint8_t>(dim(tensor, 0), dim(tensor, 1), dim(tensor, 2), to_u8(tensor.payload)));
  }
  return ImageRaster(
      Raster<float>(dim(tensor, 0), dim(tensor, 1), dim(tensor, 2), le_to_floats(tensor.payload)));
}

RefMap refmap_from_tensor(const RawTensor& tensor) {
  expect_shape(tensor, 2, "reference map");
  std::vector<ClassId> values(tensor.element_count());
  if (tensor.dtype == DType::kU8) {
    std::transform(tensor.payload.begin(), tensor.payload.end(), values.begin(),
                   [](std::byte b) { return static_cast<ClassId>(std::to_integer<std::uint8_t>(b)); });
  } else {
    const auto floats = le_to_floats(tensor.payload);
    for (std::size_t i = 0; i < floats.size(); ++i) {
      const float v = floats[i];
      if (!(v >= 0.0f && v <= 65535.0f) || std::floor(v) != v) {
        throw FormatError(FormatErrc::kValueOutOfRange, "map value is not a class id");
      }
      values[i] = static_cast<ClassId>(v);
    }
  }
  return RefMap(dim(tensor, 0), dim(tensor, 1), std::move(values));
}

MaskStack masks_from_tensor(const RawTensor& tensor) {
  expect_shape(tensor, 3, "mask stack");
  expect_dtype(tensor, DType::kU8, "mask stack");
  auto values = to_u8(tensor.payload);
  if (std::any_of(values.begin(), values.end(), [](std::uint8_t v) { return v > 1; })) {
    throw FormatError(FormatErrc::kValueOutOfRange, "mask stack values must be 0 or 1");
  }
  return MaskStack(dim(tensor, 0), dim(tensor, 1), dim(tensor, 2), std::move(values));
}

Heatmap heatmap_from_tensor(const RawTensor& tensor) {
  expect_shape(tensor, 3, "heatmap");
  expect_dtype(tensor, DType::kF32, "heatmap");
  auto values = le_to_floats(tensor.payload);
  if (std::any_of(values.begin(), values.end(), [](float v) { return !(v >= 0.0f && v <= 1.0f); })) {
    throw FormatError(FormatErrc::kValueOutOfRange, "heatmap values must lie in [0, 1]");
  }
  return Heatmap(dim(tensor, 0), dim(tensor, 1), dim(tensor, 2), std::move(values));
}

// ----------------------------------------------------------------------- PNG

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr file(std::fopen(path.c_str(), mode));
  if (!file) throw FormatError(FormatErrc::kIo, "cannot open " + path.string());
  return file;
}

[[noreturn]] void png_error_handler(png_structp png, png_const_charp message) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  *what = message;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

struct DecodedPng {
  int height = 0;
  int width = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> rows;  // interleaved, big-endian 16-bit samples
};

// `keep_palette` leaves palette indices as grey samples.
DecodedPng decode_png(const std::filesystem::path& path, bool keep_palette) {
  auto file = open_file(path, "rb");
  std::string error;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_handler, png_warning_handler);
  if (png == nullptr) throw FormatError(FormatErrc::kIo, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  DecodedPng out;
  std::vector<png_bytep> row_ptrs;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(FormatErrc::kUnsupportedPng, path.string() + ": " + error);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE && !keep_palette) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE && keep_palette && depth < 8) png_set_packing(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS) && !keep_palette) png_set_tRNS_to_alpha(png);
  if (png_get_interlace_type(png, info) != PNG_INTERLACE_NONE) png_set_interlace_handling(png);
  png_read_update_info(png, info);

  out.height = static_cast<int>(png_get_image_height(png, info));
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.rows.resize(stride * static_cast<std::size_t>(out.height));
  row_ptrs.resize(static_cast<std::size_t>(out.height));
  for (int r = 0; r < out.height; ++r) row_ptrs[r] = out.rows.data() + stride * r;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void encode_png(const std::filesystem::path& path, int height, int width, int color_type,
                int bit_depth, const std::vector<std::uint8_t>& rows) {
  auto file = open_file(path, "wb");
  std::string error;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_handler, png_warning_handler);
  if (png == nullptr) throw FormatError(FormatErrc::kIo, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw FormatError(FormatErrc::kIo, path.string() + ": " + error);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = rows.size() / static_cast<std::size_t>(height);
  for (int r = 0; r < height; ++r) {
    png_write_row(png, const_cast<png_bytep>(rows.data() + stride * r));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

ImageRaster read_png_image(const std::filesystem::path& path) {
  const auto png = decode_png(path, false);
  if (png.bit_depth != 8) {
    throw FormatError(FormatErrc::kUnsupportedPng,
                      path.string() + ": images must be 8-bit, got " + std::to_string(png.bit_depth));
  }
  Raster<std::uint8_t> raster(png.channels, png.height, png.width);
  for (int r = 0; r < png.height; ++r) {
    const std::uint8_t* row = png.rows.data() + static_cast<std::size_t>(r) * png.width * png.channels;
    for (int c = 0; c < png.width; ++c) {
      for (int ch = 0; ch < png.channels; ++ch) raster.at(ch, r, c) = row[c * png.channels + ch];
    }
  }
  return ImageRaster(std::move(raster));
}

RefMap read_png_map(const std::filesystem::path& path) {
  const auto png = decode_png(path, true);
  if (png.channels != 1) {
    throw FormatError(FormatErrc::kUnsupportedPng,
                      path.string() + ": maps must be single-channel, got " +
                          std::to_string(png.channels) + " channels");
  }
  RefMap map(png.height, png.width);
  auto values = map.data();
  if (png.bit_depth == 16) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = static_cast<ClassId>((png.rows[2 * i] << 8) | png.rows[2 * i + 1]);
    }
  } else if (png.bit_depth == 8) {
    std::copy(png.rows.begin(), png.rows.end(), values.begin());
  } else {
    throw FormatError(FormatErrc::kUnsupportedPng, path.string() + ": unsupported bit depth");
  }
  return map;
}

void write_png_image(const std::filesystem::path& path, const ImageRaster& image) {
  if (image.dtype() != DType::kU8 || image.channels() > 4) {
    throw FormatError(FormatErrc::kUnsupportedPng, "only 8-bit images with 1-4 channels");
  }
  static constexpr int kColorTypes[] = {PNG_COLOR_TYPE_GRAY, PNG_COLOR_TYPE_GRAY_ALPHA,
                                        PNG_COLOR_TYPE_RGB, PNG_COLOR_TYPE_RGB_ALPHA};
  const auto& raster = image.as<std::uint8_t>();
  const int ch = raster.planes();
  std::vector<std::uint8_t> rows(raster.size());
  for (int r = 0; r < raster.height(); ++r) {
    for (int c = 0; c < raster.width(); ++c) {
      for (int p = 0; p < ch; ++p) {
        rows[(static_cast<std::size_t>(r) * raster.width() + c) * ch + p] = raster.at(p, r, c);
      }
    }
  }
  encode_png(path, raster.height(), raster.width(), kColorTypes[ch - 1], 8, rows);
}

void write_png_map(const std::filesystem::path& path, const RefMap& map, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw FormatError(FormatErrc::kUnsupportedPng, "map bit depth must be 8 or 16");
  }
  const auto values = map.data();
  std::vector<std::uint8_t> rows;
  rows.reserve(values.size() * (bit_depth / 8));
  for (ClassId v : values) {
    if (bit_depth == 8) {
      if (v > 255) throw FormatError(FormatErrc::kValueOutOfRange, "class id does not fit 8 bits");
      rows.push_back(static_cast<std::uint8_t>(v));
    } else {
      rows.push_back(static_cast<std::uint8_t>(v >> 8));
      rows.push_back(static_cast<std::uint8_t>(v & 0xFF));
    }
  }
  encode_png(path, map.height(), map.width(), PNG_COLOR_TYPE_GRAY, bit_depth, rows);
}

namespace {

bool is_png(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png";
}

}  // namespace

ImageRaster load_image_file(const std::filesystem::path& path) {
  return is_png(path) ? read_png_image(path) : image_from_tensor(read_tensor_file(path));
}

RefMap load_map_file(const std::filesystem::path& path) {
  return is_png(path) ? read_png_map(path) : refmap_from_tensor(read_tensor_file(path));
}

}  // namespace cutmixlp
