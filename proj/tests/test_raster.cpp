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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "cutmixlp/box_ops.hpp"
#include "cutmixlp/raster.hpp"
#include "cutmixlp/rng.hpp"

using namespace cutmixlp;

namespace {

Box random_box(RngStream& rng, int h, int w) {
  const int r0 = static_cast<int>(rng.uniform_int(0, h - 1));
  const int c0 = static_cast<int>(rng.uniform_int(0, w - 1));
  return {r0, c0, static_cast<int>(rng.uniform_int(r0 + 1, h)), static_cast<int>(rng.uniform_int(c0 + 1, w))};
}

int mask_sum(const Raster<std::uint8_t>& m) {
  return std::accumulate(m.data().begin(), m.data().end(), 0);
}

}  // namespace

TEST_CASE("binary_mask examples") {
  CHECK(mask_sum(binary_mask({0, 0, 4, 4}, 4, 4)) == 16);
  const auto unit = binary_mask({0, 0, 1, 1}, 4, 4);
  CHECK(mask_sum(unit) == 1);
  CHECK(unit.at(0, 0, 0) == 1);

  const auto m = binary_mask({1, 1, 3, 2}, 4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const bool expected = (r == 1 && c == 1) || (r == 2 && c == 1);
      CHECK(m.at(0, r, c) == (expected ? 1 : 0));
    }
  }
  CHECK(mask_sum(m) == 2);
}

TEST_CASE("binary_mask rejects out-of-bounds and empty boxes") {
  CHECK_THROWS_AS(binary_mask({0, 0, 5, 4}, 4, 4), ContractError);
  CHECK_THROWS_AS(binary_mask({-1, 0, 2, 2}, 4, 4), ContractError);
  CHECK_THROWS_AS(binary_mask({2, 2, 2, 3}, 4, 4), ContractError);
}

TEST_CASE("binary_mask sum equals area for random boxes") {
  RngStream rng(11, Purpose::kFixture, {100});
  for (int i = 0; i < 1000; ++i) {
    const int h = static_cast<int>(rng.uniform_int(1, 40));
    const int w = static_cast<int>(rng.uniform_int(1, 40));
    const Box b = random_box(rng, h, w);
    REQUIRE(mask_sum(binary_mask(b, h, w)) == b.area());
  }
}

TEST_CASE("shift_box_content examples") {
  Raster<int> g(1, 2, 2, std::vector<int>{5, 0, 0, 0});
  const auto out = shift_box_content(g, {0, 0, 1, 1}, {1, 1, 2, 2});
  CHECK(out.data()[0] == 0);
  CHECK(out.data()[1] == 0);
  CHECK(out.data()[2] == 0);
  CHECK(out.data()[3] == 5);

  RefMap map(6, 6, ClassId{1});
  const Box src{0, 0, 2, 3};
  const Box dst{3, 2, 5, 5};
  for (int r = src.row0; r < src.row1; ++r) {
    for (int c = src.col0; c < src.col1; ++c) map.at(r, c) = 3;
  }
  const auto moved = shift_box_content(map, src, dst);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) CHECK(moved.at(r, c) == (dst.contains(r, c) ? 3 : 0));
  }
  CHECK_THROWS_AS(shift_box_content(map, {0, 0, 2, 2}, {0, 0, 2, 3}), ContractError);
}

TEST_CASE("identity shift equals masking") {
  RngStream rng(12, Purpose::kFixture, {1});
  Raster<std::uint8_t> img(3, 9, 7);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.below(256));
  const Box b{2, 1, 6, 5};
  const auto out = shift_box_content(img, b, b);
  const auto mask = binary_mask(b, 9, 7);
  for (int p = 0; p < 3; ++p) {
    for (int r = 0; r < 9; ++r) {
      for (int c = 0; c < 7; ++c) CHECK(out.at(p, r, c) == mask.at(0, r, c) * img.at(p, r, c));
    }
  }
}

TEST_CASE("shift preserves content and inverts") {
  RngStream rng(13, Purpose::kFixture, {2});
  for (int i = 0; i < 300; ++i) {
    const int h = static_cast<int>(rng.uniform_int(1, 20));
    const int w = static_cast<int>(rng.uniform_int(1, 20));
    Raster<std::uint16_t> src(2, h, w);
    for (auto& v : src.data()) v = static_cast<std::uint16_t>(1 + rng.below(1000));
    const Box a = random_box(rng, h, w);
    const int r0 = static_cast<int>(rng.uniform_int(0, h - a.height()));
    const int c0 = static_cast<int>(rng.uniform_int(0, w - a.width()));
    const Box b{r0, c0, r0 + a.height(), c0 + a.width()};

    const auto out = shift_box_content(src, a, b);
    for (int p = 0; p < 2; ++p) {
      std::vector<int> inside_src, inside_dst;
      for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
          if (a.contains(r, c)) inside_src.push_back(src.at(p, r, c));
          if (b.contains(r, c)) {
            inside_dst.push_back(out.at(p, r, c));
          } else {
            REQUIRE(out.at(p, r, c) == 0);
          }
        }
      }
      std::sort(inside_src.begin(), inside_src.end());
      std::sort(inside_dst.begin(), inside_dst.end());
      REQUIRE(inside_src == inside_dst);
    }
    REQUIRE(shift_box_content(out, b, a) == shift_box_content(src, a, a));
  }
}

TEST_CASE("paste_box keeps base outside the box") {
  Raster<int> base(1, 3, 3, 1);
  Raster<int> donor(1, 3, 3, std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto out = paste_box(base, donor, {0, 0, 1, 2}, {2, 1, 3, 3});
  CHECK(std::vector<int>(out.data().begin(), out.data().end()) ==
        std::vector<int>{8, 9, 1, 1, 1, 1, 1, 1, 1});
}

TEST_CASE("validate_pair reports") {
  RefMap all_one(4, 4, ClassId{1});
  CHECK(validate_pair(all_one, MultiLabel(3, {1})).ok());

  RefMap two = all_one;
  two.at(0, 0) = 2;
  const auto unlabeled = validate_pair(two, MultiLabel(3, {1}));
  REQUIRE(unlabeled.messages().size() == 1);
  CHECK(unlabeled.messages()[0] == "class 2 unlabeled at image level");

  const auto missing = validate_pair(all_one, MultiLabel(3, {1, 2}));
  REQUIRE(missing.messages().size() == 1);
  CHECK(missing.messages()[0] == "class 2 has no pixels");

  RefMap too_high = all_one;
  too_high.at(1, 1) = 4;
  CHECK_THROWS_AS(validate_pair(too_high, MultiLabel(3, {1})), ContractError);
}

TEST_CASE("value type invariants") {
  CHECK_THROWS_AS(MaskStack(1, 1, 2, {0, 2}), ContractError);
  CHECK_THROWS_AS(Heatmap(1, 1, 2, {0.5F, 1.5F}), ContractError);
  CHECK_THROWS_AS(SoftLabel({0.2, -0.1}), ContractError);
  MultiLabel label(4, {1, 3});
  CHECK(label.has(1));
  CHECK_FALSE(label.has(2));
  CHECK(label.count() == 2);
  CHECK_THROWS_AS(label.set(5), ContractError);
  CHECK(to_string(label) == "{1,3}");
  CHECK((label | MultiLabel(4, {2})).classes() == std::vector<ClassId>{1, 2, 3});
}
