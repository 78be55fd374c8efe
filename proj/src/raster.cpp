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

#include "cutmixlp/raster.hpp"

#include <algorithm>
#include <sstream>

namespace cutmixlp {

const char* to_string(FormatErrc code) {
  switch (code) {
    case FormatErrc::kIo: return "io error";
    case FormatErrc::kBadMagic: return "bad magic";
    case FormatErrc::kBadVersion: return "unsupported version";
    case FormatErrc::kBadDtype: return "bad dtype";
    case FormatErrc::kBadRank: return "bad rank";
    case FormatErrc::kDimOverflow: return "dim overflow";
    case FormatErrc::kTruncatedPayload: return "truncated payload";
    case FormatErrc::kTrailingBytes: return "trailing bytes";
    case FormatErrc::kUnsupportedPng: return "unsupported png";
    case FormatErrc::kValueOutOfRange: return "value out of range";
  }
  return "unknown format error";
}

const char* to_string(DType dtype) {
  return dtype == DType::kU8 ? "u8" : "f32";
}

DType parse_dtype(const std::string& name) {
  if (name == "u8" || name == "uint8") return DType::kU8;
  if (name == "f32" || name == "float32") return DType::kF32;
  throw ConfigError("unknown dtype '" + name + "' (expected u8 or f32)");
}

void check_box(const Box& box, int height, int width) {
  if (box.row0 < 0 || box.row0 >= box.row1 || box.row1 > height || box.col0 < 0 ||
      box.col0 >= box.col1 || box.col1 > width) {
    throw ContractError("box " + to_string(box) + " is not a valid non-empty box in a " +
                        std::to_string(height) + "x" + std::to_string(width) + " raster");
  }
}

std::string to_string(const Box& box) {
  std::ostringstream os;
  os << "(" << box.row0 << "," << box.col0 << "," << box.row1 << "," << box.col1 << ")";
  return os.str();
}

ImageRaster::ImageRaster(DType dtype, int channels, int height, int width) {
  if (dtype == DType::kU8) {
    storage_ = Raster<std::uint8_t>(channels, height, width);
  } else {
    storage_ = Raster<float>(channels, height, width);
  }
}

int ImageRaster::channels() const {
  return std::visit([](const auto& r) { return r.planes(); }, storage_);
}
int ImageRaster::height() const {
  return std::visit([](const auto& r) { return r.height(); }, storage_);
}
int ImageRaster::width() const {
  return std::visit([](const auto& r) { return r.width(); }, storage_);
}

std::span<const std::byte> ImageRaster::bytes() const {
  return std::visit([](const auto& r) { return std::as_bytes(r.data()); }, storage_);
}

RefMap::RefMap(Raster<ClassId> raster) : Raster(std::move(raster)) {
  if (planes() != 1) throw ContractError("reference map must have exactly one plane");
}

ClassId RefMap::max_class() const {
  const auto values = data();
  return values.empty() ? kVoid : *std::max_element(values.begin(), values.end());
}

namespace {

void check_binary(std::span<const std::uint8_t> values) {
  for (std::uint8_t v : values) {
    if (v > 1) throw ContractError("mask stack values must be 0 or 1");
  }
}

void check_unit_interval(std::span<const float> values) {
  for (float v : values) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw ContractError("heatmap value " + std::to_string(v) + " outside [0, 1]");
    }
  }
}

}  // namespace

MaskStack::MaskStack(int num_classes, int height, int width, std::vector<std::uint8_t> data)
    : Raster(num_classes, height, width, std::move(data)) {
  check_binary(this->data());
}

MaskStack::MaskStack(Raster<std::uint8_t> raster) : Raster(std::move(raster)) {
  check_binary(data());
}

Heatmap::Heatmap(int num_classes, int height, int width, std::vector<float> data)
    : Raster(num_classes, height, width, std::move(data)) {
  check_unit_interval(this->data());
}

Heatmap::Heatmap(Raster<float> raster) : Raster(std::move(raster)) {
  check_unit_interval(data());
}

MultiLabel::MultiLabel(int num_classes) {
  if (num_classes <= 0) throw ContractError("class count must be positive");
  bits_.assign(static_cast<std::size_t>(num_classes), 0);
}

MultiLabel::MultiLabel(int num_classes, std::span<const ClassId> classes) : MultiLabel(num_classes) {
  for (ClassId cls : classes) set(cls);
}

void MultiLabel::check_class(ClassId cls) const {
  if (cls == kVoid || cls > bits_.size()) {
    throw ContractError("class id " + std::to_string(cls) + " outside 1.." +
                        std::to_string(bits_.size()));
  }
}

bool MultiLabel::has(ClassId cls) const {
  check_class(cls);
  return bits_[cls - 1] != 0;
}

void MultiLabel::set(ClassId cls, bool present) {
  check_class(cls);
  bits_[cls - 1] = present ? 1 : 0;
}

std::vector<ClassId> MultiLabel::classes() const {
  std::vector<ClassId> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(static_cast<ClassId>(i + 1));
  }
  return out;
}

std::size_t MultiLabel::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

MultiLabel MultiLabel::operator|(const MultiLabel& other) const {
  if (other.num_classes() != num_classes()) {
    throw ContractError("label length mismatch: " + std::to_string(num_classes()) + " vs " +
                        std::to_string(other.num_classes()));
  }
  MultiLabel out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] |= other.bits_[i];
  return out;
}

std::string to_string(const MultiLabel& label) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (ClassId cls : label.classes()) {
    os << (first ? "" : ",") << cls;
    first = false;
  }
  os << "}";
  return os.str();
}

SoftLabel::SoftLabel(std::vector<double> weights) : weights_(std::move(weights)) {
  for (double w : weights_) {
    if (!(w >= 0.0 && w <= 1.0)) throw ContractError("soft label weight outside [0, 1]");
  }
}

}  // namespace cutmixlp
