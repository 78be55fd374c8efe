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

// Value types shared by every module: planar rasters, images, reference maps,
// explanation mask stacks, heatmaps, multi-labels and boxes.
//
// Layout is always planar row-major: plane, then row, then column.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cutmixlp/error.hpp"

namespace cutmixlp {

/// Class id stored in reference maps. 0 is void; classes are 1..L.
using ClassId = std::uint16_t;
inline constexpr ClassId kVoid = 0;

enum class DType : std::uint8_t { kU8 = 0, kF32 = 1 };

const char* to_string(DType dtype);
DType parse_dtype(const std::string& name);

/// Half-open pixel rectangle [row0, row1) x [col0, col1).
struct Box {
  int row0 = 0;
  int col0 = 0;
  int row1 = 0;
  int col1 = 0;

  int height() const { return row1 - row0; }
  int width() const { return col1 - col0; }
  std::int64_t area() const { return static_cast<std::int64_t>(height()) * width(); }
  bool contains(int row, int col) const {
    return row >= row0 && row < row1 && col >= col0 && col < col1;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

/// Throws ContractError unless 0 <= row0 < row1 <= height and
/// 0 <= col0 < col1 <= width.
void check_box(const Box& box, int height, int width);

std::string to_string(const Box& box);

template <class T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int planes, int height, int width, T fill = T{})
      : planes_(planes), height_(height), width_(width) {
    check_dims();
    data_.assign(size(), fill);
  }
  Raster(int planes, int height, int width, std::vector<T> data)
      : planes_(planes), height_(height), width_(width), data_(std::move(data)) {
    check_dims();
    if (data_.size() != size()) {
      throw ContractError("raster data length " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(planes) + "x" +
                          std::to_string(height) + "x" + std::to_string(width));
    }
  }

  int planes() const { return planes_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  std::size_t size() const { return plane_size() * static_cast<std::size_t>(planes_); }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  const std::vector<T>& values() const { return data_; }

  std::span<T> plane(int p) { return {data_.data() + offset(p, 0, 0), plane_size()}; }
  std::span<const T> plane(int p) const { return {data_.data() + offset(p, 0, 0), plane_size()}; }
  std::span<T> row(int p, int r) {
    return {data_.data() + offset(p, r, 0), static_cast<std::size_t>(width_)};
  }
  std::span<const T> row(int p, int r) const {
    return {data_.data() + offset(p, r, 0), static_cast<std::size_t>(width_)};
  }

  T& at(int p, int r, int c) { return data_[offset(p, r, c)]; }
  const T& at(int p, int r, int c) const { return data_[offset(p, r, c)]; }

  bool same_shape(const Raster& other) const {
    return planes_ == other.planes_ && height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 protected:
  std::size_t offset(int p, int r, int c) const {
    return (static_cast<std::size_t>(p) * height_ + r) * width_ + c;
  }

 private:
  void check_dims() const {
    if (planes_ <= 0 || height_ <= 0 || width_ <= 0) {
      throw ContractError("raster dimensions must be positive");
    }
  }

  int planes_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

/// C x H x W image with 8-bit unsigned or 32-bit float samples.
class ImageRaster {
 public:
  using Storage = std::variant<Raster<std::uint8_t>, Raster<float>>;

  ImageRaster() = default;
  explicit ImageRaster(Raster<std::uint8_t> raster) : storage_(std::move(raster)) {}
  explicit ImageRaster(Raster<float> raster) : storage_(std::move(raster)) {}
  ImageRaster(DType dtype, int channels, int height, int width);

  DType dtype() const { return storage_.index() == 0 ? DType::kU8 : DType::kF32; }
  int channels() const;
  int height() const;
  int width() const;

  const Storage& storage() const { return storage_; }
  Storage& storage() { return storage_; }

  template <class T>
  const Raster<T>& as() const { return std::get<Raster<T>>(storage_); }
  template <class T>
  Raster<T>& as() { return std::get<Raster<T>>(storage_); }

  /// Raw sample bytes in native (little-endian) order.
  std::span<const std::byte> bytes() const;

  friend bool operator==(const ImageRaster&, const ImageRaster&) = default;

 private:
  Storage storage_;
};

/// H x W class-id raster. Entry 0 is void.
class RefMap : public Raster<ClassId> {
 public:
  RefMap() = default;
  RefMap(int height, int width, ClassId fill = kVoid) : Raster(1, height, width, fill) {}
  RefMap(int height, int width, std::vector<ClassId> data) : Raster(1, height, width, std::move(data)) {}
  explicit RefMap(Raster<ClassId> raster);

  using Raster::at;
  ClassId& at(int r, int c) { return Raster::at(0, r, c); }
  const ClassId& at(int r, int c) const { return Raster::at(0, r, c); }

  ClassId max_class() const;
};

/// L x H x W binary explanation masks; plane l belongs to class l + 1.
class MaskStack : public Raster<std::uint8_t> {
 public:
  MaskStack() = default;
  MaskStack(int num_classes, int height, int width) : Raster(num_classes, height, width, 0) {}
  /// Throws ContractError if any value is not 0 or 1.
  MaskStack(int num_classes, int height, int width, std::vector<std::uint8_t> data);
  explicit MaskStack(Raster<std::uint8_t> raster);

  int num_classes() const { return planes(); }
};

/// L x H x W per-class relevance in [0, 1]. Construction rejects values
/// outside the unit interval (including NaN).
class Heatmap : public Raster<float> {
 public:
  Heatmap() = default;
  Heatmap(int num_classes, int height, int width, std::vector<float> data);
  explicit Heatmap(Raster<float> raster);

  int num_classes() const { return planes(); }
};

/// Binary presence vector over classes 1..L.
class MultiLabel {
 public:
  MultiLabel() = default;
  explicit MultiLabel(int num_classes);
  MultiLabel(int num_classes, std::span<const ClassId> classes);
  MultiLabel(int num_classes, std::initializer_list<ClassId> classes)
      : MultiLabel(num_classes, std::span<const ClassId>(classes.begin(), classes.size())) {}

  int num_classes() const { return static_cast<int>(bits_.size()); }
  bool has(ClassId cls) const;
  void set(ClassId cls, bool present = true);

  /// Present classes in ascending order.
  std::vector<ClassId> classes() const;
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  MultiLabel operator|(const MultiLabel& other) const;

  friend bool operator==(const MultiLabel&, const MultiLabel&) = default;

 private:
  void check_class(ClassId cls) const;

  std::vector<std::uint8_t> bits_;
};

std::string to_string(const MultiLabel& label);

/// Area-weighted label with entries in [0, 1].
class SoftLabel {
 public:
  SoftLabel() = default;
  explicit SoftLabel(std::vector<double> weights);

  int num_classes() const { return static_cast<int>(weights_.size()); }
  double weight(ClassId cls) const { return weights_.at(static_cast<std::size_t>(cls) - 1); }
  const std::vector<double>& weights() const { return weights_; }

  friend bool operator==(const SoftLabel&, const SoftLabel&) = default;

 private:
  std::vector<double> weights_;
};

}  // namespace cutmixlp
