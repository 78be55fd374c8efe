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

#include <map>

#include "cutmixlp/boxgen.hpp"
#include "oracles.hpp"

using namespace cutmixlp;

namespace {

struct NamedRange {
  BoxSizeRange range;
  int lo_permille;
  int hi_permille;
};

const NamedRange kFiveRanges[] = {
    {{0.1, 0.3}, 100, 300}, {{0.1, 0.5}, 100, 500}, {{0.1, 0.7}, 100, 700},
    {{0.3, 0.5}, 300, 500}, {{0.3, 0.7}, 300, 700},
};

std::map<oracle::BoxKey, std::int64_t> histogram(const std::vector<Box>& boxes) {
  std::map<oracle::BoxKey, std::int64_t> out;
  for (const auto& b : boxes) ++out[{b.row0, b.col0, b.row1, b.col1}];
  return out;
}

}  // namespace

TEST_CASE("box ranges parse and validate") {
  CHECK(parse_box_range("0.3-0.7") == BoxSizeRange{0.3, 0.7});
  CHECK(parse_box_range("0.1,0.5") == BoxSizeRange{0.1, 0.5});
  CHECK_THROWS_AS(parse_box_range("0.7-0.3"), ConfigError);
  CHECK_THROWS_AS(parse_box_range("0-0.3"), ConfigError);
  CHECK_THROWS_AS(parse_box_range("0.3-1.2"), ConfigError);
  CHECK_THROWS_AS(parse_box_range("abc"), ConfigError);
}

TEST_CASE("full-area range forces the full box") {
  RngStream rng(1, Purpose::kGenBoxes, {});
  for (const auto& b : gen_boxes({1.0, 1.0}, 200, 4, 4, rng)) CHECK(b == Box{0, 0, 4, 4});
}

TEST_CASE("five ranges: every box inside its range") {
  for (const auto& r : kFiveRanges) {
    RngStream rng(42, Purpose::kGenBoxes, {static_cast<std::uint64_t>(r.lo_permille), static_cast<std::uint64_t>(r.hi_permille)});
    const auto boxes = gen_boxes(r.range, 10000, 120, 120, rng);
    REQUIRE(boxes.size() == 10000);
    int violations = 0;
    for (const auto& b : boxes) {
      const std::int64_t a = b.area();
      violations += (a * 1000 < r.lo_permille * 14400 || a * 1000 > r.hi_permille * 14400 ||
                     b.row0 < 0 || b.col0 < 0 || b.row1 > 120 || b.col1 > 120 || a <= 0);
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("deterministic box sequences") {
  RngStream a(5, Purpose::kGenBoxes, {1});
  RngStream b(5, Purpose::kGenBoxes, {1});
  CHECK(gen_boxes({0.1, 0.5}, 100, 64, 48, a) == gen_boxes({0.1, 0.5}, 100, 64, 48, b));
}

TEST_CASE("8x8 grid matches the exhaustive acceptance distribution") {
  for (const auto& r : kFiveRanges) {
    const auto expected = oracle::box_acceptance_counts(8, 8, r.lo_permille, r.hi_permille);
    RngStream rng(9, Purpose::kGenBoxes, {static_cast<std::uint64_t>(r.lo_permille), static_cast<std::uint64_t>(r.hi_permille)});
    const std::int64_t n = 100000;
    const auto observed = histogram(gen_boxes(r.range, static_cast<int>(n), 8, 8, rng));
    for (const auto& [k, v] : observed) REQUIRE(expected.count(k) == 1);
    const double p = oracle::chi_square_p(expected, observed, n);
    INFO("range " << to_string(r.range) << " p=" << p);
    CHECK(p > 0.01);
  }
}

TEST_CASE("quarter-area range on 2x2: four unit boxes, uniform") {
  const auto expected = oracle::box_acceptance_counts(2, 2, 250, 250);
  REQUIRE(expected.size() == 4);
  for (const auto& [k, v] : expected) CHECK(v == 4);
  RngStream rng(3, Purpose::kGenBoxes, {});
  const auto observed = histogram(gen_boxes({0.25, 0.25}, 40000, 2, 2, rng));
  CHECK(observed.size() == 4);
  CHECK(oracle::chi_square_p(expected, observed, 40000) > 0.01);
}

TEST_CASE("infeasible ranges are rejected before sampling") {
  RngStream rng(1, Purpose::kGenBoxes, {});
  // 3x3 image: areas are multiples of 1/9; none lies in [0.2, 0.21].
  CHECK_FALSE(box_range_feasible({0.2, 0.21}, 3, 3));
  CHECK_THROWS_AS(gen_boxes({0.2, 0.21}, 1, 3, 3, rng), ConfigError);
  CHECK(box_range_feasible({0.2, 0.23}, 3, 3));
  CHECK_THROWS_AS(gen_boxes({0.3, 0.7}, 0, 8, 8, rng), ConfigError);
}

TEST_CASE("partner boxes") {
  RngStream rng(2, Purpose::kPartner, {});
  for (int i = 0; i < 100; ++i) CHECK(sample_partner_box({0, 0, 7, 5}, 7, 5, rng) == Box{0, 0, 7, 5});

  std::map<oracle::BoxKey, std::int64_t> seen;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const Box b = sample_partner_box({0, 0, 1, 1}, 2, 2, rng);
    ++seen[{b.row0, b.col0, b.row1, b.col1}];
  }
  const std::map<oracle::BoxKey, std::int64_t> uniform = {
      {{0, 0, 1, 1}, 1}, {{0, 1, 1, 2}, 1}, {{1, 0, 2, 1}, 1}, {{1, 1, 2, 2}, 1}};
  CHECK(seen.size() == 4);
  CHECK(oracle::chi_square_p(uniform, seen, n) > 0.01);

  for (int i = 0; i < 2000; ++i) {
    const Box b = sample_partner_box({10, 20, 70, 80}, 120, 120, rng);
    REQUIRE(b.height() == 60);
    REQUIRE(b.width() == 60);
    REQUIRE(b.row0 >= 0);
    REQUIRE(b.row0 <= 60);
    REQUIRE(b.col0 >= 0);
    REQUIRE(b.col0 <= 60);
  }
}
