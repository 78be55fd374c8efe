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

#include "cutmixlp/cutmix.hpp"
#include "cutmixlp/synthetic.hpp"
#include "oracles.hpp"

using namespace cutmixlp;

namespace {

constexpr int kL = 5;

RefMap random_blocky_map(RngStream& rng, int h, int w) {
  RefMap m(h, w, static_cast<ClassId>(rng.below(kL + 1)));
  const int rects = static_cast<int>(rng.uniform_int(0, 4));
  for (int k = 0; k < rects; ++k) {
    const int r0 = static_cast<int>(rng.below(h));
    const int c0 = static_cast<int>(rng.below(w));
    const int r1 = static_cast<int>(rng.uniform_int(r0 + 1, h));
    const int c1 = static_cast<int>(rng.uniform_int(c0 + 1, w));
    const auto cls = static_cast<ClassId>(rng.below(kL + 1));
    for (int r = r0; r < r1; ++r) {
      for (int c = c0; c < c1; ++c) m.at(r, c) = cls;
    }
  }
  return m;
}

MaskStack random_masks(RngStream& rng, int h, int w) {
  MaskStack m(kL, h, w);
  for (int l = 0; l < kL; ++l) {
    const auto density = rng.below(4);  // 0, 1/8, 2/8, 3/8
    for (auto& v : m.plane(l)) v = rng.below(8) < density ? 1 : 0;
  }
  return m;
}

std::pair<Box, Box> random_box_pair(RngStream& rng, int h, int w) {
  const int bh = static_cast<int>(rng.uniform_int(1, h));
  const int bw = static_cast<int>(rng.uniform_int(1, w));
  auto place = [&] {
    const int r = static_cast<int>(rng.uniform_int(0, h - bh));
    const int c = static_cast<int>(rng.uniform_int(0, w - bw));
    return Box{r, c, r + bh, c + bw};
  };
  const Box a = place();
  return {a, place()};
}

Sample make_sample(const std::string& id, RngStream& rng, int h, int w) {
  Raster<std::uint8_t> img(3, h, w);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.below(256));
  RefMap map = random_blocky_map(rng, h, w);
  MultiLabel label = readout_phi(map, kL);
  return {id, ImageRaster(std::move(img)), label, std::move(map), random_masks(rng, h, w)};
}

}  // namespace

TEST_CASE("policy names") {
  CHECK(parse_policy("lp_map") == LabelPolicy::kLpMap);
  CHECK(std::string(to_string(LabelPolicy::kLpXai)) == "lp_xai");
  CHECK_THROWS_AS(parse_policy("mixup"), ConfigError);
}

TEST_CASE("phi of the paired map equals the brute-force surviving classes") {
  RngStream rng(2024, Purpose::kFixture, {10});
  for (int i = 0; i < 1000; ++i) {
    const RefMap m1 = random_blocky_map(rng, 16, 16);
    const RefMap m2 = random_blocky_map(rng, 16, 16);
    const auto [b1, b2] = random_box_pair(rng, 16, 16);
    const auto got = oracle::as_set(readout_phi(compose_map(m1, m2, b1, b2), kL));
    REQUIRE(got == oracle::surviving_classes(oracle::to_grid(m1), oracle::to_grid(m2), b1, b2));
  }
}

TEST_CASE("psi of the paired masks equals the brute-force count rule") {
  RngStream rng(2025, Purpose::kFixture, {11});
  for (std::int64_t t_map : {0, 10}) {
    for (int i = 0; i < 1000; ++i) {
      const MaskStack e1 = random_masks(rng, 16, 16);
      const MaskStack e2 = random_masks(rng, 16, 16);
      const auto [b1, b2] = random_box_pair(rng, 16, 16);
      const auto got = oracle::as_set(readout_psi(compose_masks(e1, e2, b1, b2), t_map));
      REQUIRE(got == oracle::surviving_mask_classes(e1, e2, b1, b2, t_map));
    }
  }
}

TEST_CASE("paired image matches the pixel rule") {
  RngStream rng(7, Purpose::kFixture, {12});
  const Sample a = make_sample("a", rng, 12, 10);
  const Sample b = make_sample("b", rng, 12, 10);
  const auto [b1, b2] = random_box_pair(rng, 12, 10);
  const auto out = compose_image(a.image, b.image, b1, b2).as<std::uint8_t>();
  const auto& x1 = a.image.as<std::uint8_t>();
  const auto& x2 = b.image.as<std::uint8_t>();
  for (int ch = 0; ch < 3; ++ch) {
    for (int r = 0; r < 12; ++r) {
      for (int c = 0; c < 10; ++c) {
        const int expected = oracle::paired_pixel(
            r, c, b1, b2, [&](int y, int x) { return int{x1.at(ch, y, x)}; },
            [&](int y, int x) { return int{x2.at(ch, y, x)}; });
        REQUIRE(out.at(ch, r, c) == expected);
      }
    }
  }
}

TEST_CASE("naive label is the area-weighted mix") {
  const MultiLabel y1(4, {1, 2});
  const MultiLabel y2(4, {2, 4});
  const auto y = naive_label(y1, y2, {0, 0, 5, 4}, 10, 10);  // area 0.2
  CHECK(y.weight(1) == doctest::Approx(0.8));
  CHECK(y.weight(2) == doctest::Approx(1.0));
  CHECK(y.weight(3) == doctest::Approx(0.0));
  CHECK(y.weight(4) == doctest::Approx(0.2));
}

TEST_CASE("void never becomes a label and the all-void pairing is flagged") {
  RefMap v(4, 4, kVoid);
  RefMap one(4, 4, ClassId{1});
  CHECK(readout_phi(compose_map(v, one, {0, 0, 2, 2}, {0, 0, 2, 2}), 2).classes() ==
        std::vector<ClassId>{1});

  Raster<std::uint8_t> img(1, 4, 4);
  Sample s1{"x", ImageRaster(img), MultiLabel(2), v, std::nullopt};
  Sample s2{"y", ImageRaster(img), MultiLabel(2), v, std::nullopt};
  const auto out = augment_with_boxes(s1, s2, LpConfig{}, {0, 0, 2, 2}, {1, 1, 3, 3});
  CHECK(std::get<MultiLabel>(out.label).empty());
  CHECK(out.provenance.empty_label);
}

TEST_CASE("smoothed map read-out applies the strict pixel threshold") {
  RefMap m(4, 4, ClassId{1});
  for (int c = 0; c < 3; ++c) m.at(0, c) = 2;  // 3 pixels of class 2
  CHECK(readout_phi(m, 2, 3).classes() == std::vector<ClassId>{1});
  CHECK(readout_phi(m, 2, 2).classes() == std::vector<ClassId>{1, 2});
}

TEST_CASE("augment under each policy") {
  RngStream rng(5, Purpose::kFixture, {13});
  const Sample a = make_sample("a", rng, 16, 16);
  const Sample b = make_sample("b", rng, 16, 16);
  for (auto policy : {LabelPolicy::kNaive, LabelPolicy::kLpMap, LabelPolicy::kLpXai}) {
    LpConfig cfg;
    cfg.policy = policy;
    RngStream boxes(1, Purpose::kBoxes, {0});
    const auto out = augment(a, b, cfg, {0.3, 0.7}, boxes);
    CHECK(out.provenance.first_id == "a");
    CHECK(out.provenance.second_id == "b");
    CHECK(out.provenance.box1.height() == out.provenance.box2.height());
    CHECK(out.provenance.box1.width() == out.provenance.box2.width());
    const double area = normalized_area(out.provenance.box1, 16, 16);
    CHECK(area >= 0.3);
    CHECK(area <= 0.7);
    if (policy == LabelPolicy::kNaive) {
      CHECK(std::holds_alternative<SoftLabel>(out.label));
    } else if (policy == LabelPolicy::kLpMap) {
      REQUIRE(out.map.has_value());
      CHECK(std::get<MultiLabel>(out.label) == readout_phi(*out.map, kL));
    } else {
      REQUIRE(out.masks.has_value());
      CHECK(std::get<MultiLabel>(out.label) == readout_psi(*out.masks, 10));
    }
    const Box& b1 = out.provenance.box1;
    const Box& b2 = out.provenance.box2;
    REQUIRE(out.map.has_value());
    REQUIRE(out.masks.has_value());
    CHECK(*out.map == compose_map(*a.map, *b.map, b1, b2));
    CHECK(*out.masks == compose_masks(*a.masks, *b.masks, b1, b2));
  }
}

TEST_CASE("missing auxiliary data is a configuration error") {
  RngStream rng(6, Purpose::kFixture, {14});
  Sample a = make_sample("a", rng, 8, 8);
  Sample b = make_sample("b", rng, 8, 8);
  b.map.reset();
  a.masks.reset();
  RngStream boxes(1, Purpose::kBoxes, {0});
  LpConfig map_cfg;
  CHECK_THROWS_AS(augment(a, b, map_cfg, {0.3, 0.7}, boxes), ConfigError);
  LpConfig xai_cfg;
  xai_cfg.policy = LabelPolicy::kLpXai;
  CHECK_THROWS_AS(augment(a, b, xai_cfg, {0.3, 0.7}, boxes), ConfigError);
}

TEST_CASE("LP labels carry no noise relative to the paired map on fixtures") {
  FixtureOptions opts;
  opts.count = 40;
  opts.height = 32;
  opts.width = 32;
  const auto samples = make_voronoi_samples(opts);
  LpConfig cfg;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& partner = samples[(i + 7) % samples.size()];
    RngStream boxes(3, Purpose::kBoxes, {i});
    const auto out = augment(samples[i], partner, cfg, {0.1, 0.7}, boxes);
    const auto truth = oracle::surviving_classes(oracle::to_grid(*samples[i].map),
                                                 oracle::to_grid(*partner.map), out.provenance.box1,
                                                 out.provenance.box2);
    REQUIRE(oracle::as_set(std::get<MultiLabel>(out.label)) == truth);
  }
}
