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

// Brute-force reference implementations. They use plain nested vectors and
// share no code with the library beyond the public value types.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "cutmixlp/raster.hpp"

namespace oracle {

using Grid = std::vector<std::vector<int>>;

inline Grid to_grid(const cutmixlp::RefMap& m) {
  Grid g(static_cast<std::size_t>(m.height()), std::vector<int>(static_cast<std::size_t>(m.width())));
  for (int r = 0; r < m.height(); ++r) {
    for (int c = 0; c < m.width(); ++c) g[r][c] = m.at(r, c);
  }
  return g;
}

/// Pixel (r, c) of the paired raster: from `second` when inside box1 (at the
/// same offset inside box2), from `first` otherwise.
template <class Get1, class Get2>
auto paired_pixel(int r, int c, const cutmixlp::Box& b1, const cutmixlp::Box& b2, Get1 first,
                  Get2 second) {
  if (r >= b1.row0 && r < b1.row1 && c >= b1.col0 && c < b1.col1) {
    return second(b2.row0 + (r - b1.row0), b2.col0 + (c - b1.col0));
  }
  return first(r, c);
}

/// Classes surviving on the paired map.
inline std::set<int> surviving_classes(const Grid& m1, const Grid& m2, const cutmixlp::Box& b1,
                                       const cutmixlp::Box& b2) {
  std::set<int> out;
  for (int r = 0; r < static_cast<int>(m1.size()); ++r) {
    for (int c = 0; c < static_cast<int>(m1[0].size()); ++c) {
      const int v = paired_pixel(
          r, c, b1, b2, [&](int y, int x) { return m1[y][x]; }, [&](int y, int x) { return m2[y][x]; });
      if (v != 0) out.insert(v);
    }
  }
  return out;
}

/// Classes whose paired mask plane keeps more than t_map ones.
inline std::set<int> surviving_mask_classes(const cutmixlp::MaskStack& a, const cutmixlp::MaskStack& b,
                                            const cutmixlp::Box& b1, const cutmixlp::Box& b2,
                                            std::int64_t t_map) {
  std::set<int> out;
  for (int l = 0; l < a.planes(); ++l) {
    std::int64_t ones = 0;
    for (int r = 0; r < a.height(); ++r) {
      for (int c = 0; c < a.width(); ++c) {
        ones += paired_pixel(
            r, c, b1, b2, [&](int y, int x) { return int{a.at(l, y, x)}; },
            [&](int y, int x) { return int{b.at(l, y, x)}; });
      }
    }
    if (ones > t_map) out.insert(l + 1);
  }
  return out;
}

inline std::set<int> as_set(const cutmixlp::MultiLabel& label) {
  std::set<int> out;
  for (int c = 1; c <= label.num_classes(); ++c) {
    if (label.has(static_cast<cutmixlp::ClassId>(c))) out.insert(c);
  }
  return out;
}

/// Exact acceptance distribution of the four-corner sampler: every corner
/// tuple in [0,H]^2 x [0,W]^2 is equally likely; a tuple is kept when its
/// box area lies in [lo_permille, hi_permille] / 1000 of H*W.
using BoxKey = std::tuple<int, int, int, int>;
inline std::map<BoxKey, std::int64_t> box_acceptance_counts(int h, int w, int lo_permille,
                                                            int hi_permille) {
  std::map<BoxKey, std::int64_t> counts;
  const std::int64_t total = static_cast<std::int64_t>(h) * w;
  for (int ra = 0; ra <= h; ++ra) {
    for (int rc = 0; rc <= h; ++rc) {
      for (int rb = 0; rb <= w; ++rb) {
        for (int rd = 0; rd <= w; ++rd) {
          const std::int64_t area = static_cast<std::int64_t>(std::abs(ra - rc)) * std::abs(rb - rd);
          if (area * 1000 < lo_permille * total || area * 1000 > hi_permille * total) continue;
          ++counts[{std::min(ra, rc), std::min(rb, rd), std::max(ra, rc), std::max(rb, rd)}];
        }
      }
    }
  }
  return counts;
}

/// Pearson chi-square p-value of observed counts against expected weights.
inline double chi_square_p(const std::map<BoxKey, std::int64_t>& weights,
                           const std::map<BoxKey, std::int64_t>& observed, std::int64_t n) {
  std::int64_t total_weight = 0;
  for (const auto& [k, v] : weights) total_weight += v;
  double stat = 0.0;
  for (const auto& [k, v] : weights) {
    const double expected = static_cast<double>(n) * static_cast<double>(v) / static_cast<double>(total_weight);
    const auto it = observed.find(k);
    const double o = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    stat += (o - expected) * (o - expected) / expected;
  }
  const boost::math::chi_squared dist(static_cast<double>(weights.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Probability that a uniformly placed h x w box in an H x W image overlaps
/// the top-left ch x cw corner.
inline double corner_hit_probability(int H, int W, int h, int w, int ch, int cw) {
  const double rows = std::min(ch, H - h + 1);
  const double cols = std::min(cw, W - w + 1);
  return rows * cols / (static_cast<double>(H - h + 1) * (W - w + 1));
}

/// Distribution of box side lengths (h, w) under the four-corner sampler,
/// restricted to area fraction [lo, hi] given in permille.
inline std::map<std::pair<int, int>, double> box_size_distribution(int H, int W, int lo_permille,
                                                                   int hi_permille) {
  auto side_count = [](int n, int len) -> double { return len == 0 ? n + 1 : 2.0 * (n + 1 - len); };
  std::map<std::pair<int, int>, double> out;
  double total = 0.0;
  const std::int64_t hw = static_cast<std::int64_t>(H) * W;
  for (int h = 0; h <= H; ++h) {
    for (int w = 0; w <= W; ++w) {
      const std::int64_t a = static_cast<std::int64_t>(h) * w;
      if (a * 1000 < lo_permille * hw || a * 1000 > hi_permille * hw) continue;
      const double weight = side_count(H, h) * side_count(W, w);
      out[{h, w}] = weight;
      total += weight;
    }
  }
  for (auto& [k, v] : out) v /= total;
  return out;
}

}  // namespace oracle
