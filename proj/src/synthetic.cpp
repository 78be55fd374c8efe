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

#include "cutmixlp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "cutmixlp/rng.hpp"
#include "cutmixlp/xai.hpp"

namespace cutmixlp {
namespace {

std::string sample_id(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%05d", i);
  return buf;
}

std::uint8_t class_colour(ClassId cls, int channel) {
  const std::uint32_t h = static_cast<std::uint32_t>(cls) * 2654435761U + static_cast<std::uint32_t>(channel) * 40503U;
  return static_cast<std::uint8_t>(40 + (h >> 8) % 176);
}

ImageRaster paint(const RefMap& map, int channels, RngStream& rng) {
  Raster<std::uint8_t> img(channels, map.height(), map.width());
  for (int c = 0; c < channels; ++c) {
    for (int r = 0; r < map.height(); ++r) {
      for (int col = 0; col < map.width(); ++col) {
        const int base = class_colour(map.at(r, col), c);
        const int noise = static_cast<int>(rng.uniform_int(-20, 20));
        img.at(c, r, col) = static_cast<std::uint8_t>(std::clamp(base + noise, 0, 255));
      }
    }
  }
  return ImageRaster(std::move(img));
}

void validate(const FixtureOptions& o) {
  if (o.count < 1 || o.num_classes < 1 || o.height < 1 || o.width < 1 || o.channels < 1 ||
      o.channels > 4) {
    throw ConfigError("fixture: count, classes, size must be positive and channels in 1..4");
  }
}

}  // namespace

MultiLabel label_from_map(const RefMap& map, int num_classes) {
  return readout_phi(map, num_classes);
}

Heatmap heatmap_from_map(const RefMap& map, int num_classes) {
  Raster<float> planes(num_classes, map.height(), map.width());
  for (int l = 0; l < num_classes; ++l) {
    for (int r = 0; r < map.height(); ++r) {
      for (int c = 0; c < map.width(); ++c) {
        planes.at(l, r, c) = map.at(r, c) == static_cast<ClassId>(l + 1) ? 1.0F : 0.05F;
      }
    }
  }
  return Heatmap(std::move(planes));
}

std::vector<Sample> make_voronoi_samples(const FixtureOptions& o) {
  validate(o);
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(o.count));
  for (int i = 0; i < o.count; ++i) {
    RngStream rng(o.seed, Purpose::kFixture, {1, static_cast<std::uint64_t>(i)});
    const int k = static_cast<int>(rng.uniform_int(std::min(2, o.num_classes), std::min(4, o.num_classes)));
    std::vector<ClassId> classes(static_cast<std::size_t>(o.num_classes));
    std::iota(classes.begin(), classes.end(), ClassId{1});
    for (int a = 0; a < k; ++a) {
      const auto b = a + static_cast<int>(rng.below(static_cast<std::uint64_t>(o.num_classes - a)));
      std::swap(classes[static_cast<std::size_t>(a)], classes[static_cast<std::size_t>(b)]);
    }
    const int sites = static_cast<int>(rng.uniform_int(std::max(4, k), 8));
    struct Site {
      int r, c;
      ClassId cls;
    };
    std::vector<Site> s;
    for (int j = 0; j < sites; ++j) {
      const ClassId cls = j < k ? classes[static_cast<std::size_t>(j)]
                                : classes[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(k)))];
      s.push_back({static_cast<int>(rng.below(static_cast<std::uint64_t>(o.height))),
                   static_cast<int>(rng.below(static_cast<std::uint64_t>(o.width))), cls});
    }
    RefMap map(o.height, o.width);
    for (int r = 0; r < o.height; ++r) {
      for (int c = 0; c < o.width; ++c) {
        long best = -1;
        ClassId cls = kVoid;
        for (const auto& site : s) {
          const long d = static_cast<long>(site.r - r) * (site.r - r) + static_cast<long>(site.c - c) * (site.c - c);
          if (best < 0 || d < best) {
            best = d;
            cls = site.cls;
          }
        }
        map.at(r, c) = cls;
      }
    }
    Sample sample{sample_id(i), paint(map, o.channels, rng), label_from_map(map, o.num_classes),
                  std::nullopt, std::nullopt};
    if (o.with_masks) {
      sample.masks = threshold_heatmaps(heatmap_from_map(map, o.num_classes), sample.label, kDefaultTCam);
    }
    sample.map = std::move(map);
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<Sample> make_corner_samples(int count, int height, int width, double corner_area,
                                        std::uint64_t seed) {
  if (count < 2 || height < 1 || width < 1 || !(corner_area > 0.0 && corner_area < 1.0)) {
    throw ConfigError("corner fixture: need count >= 2, positive size and area in (0, 1)");
  }
  const int ch = std::clamp(static_cast<int>(std::lround(std::sqrt(corner_area) * height)), 1, height);
  const int cw = std::clamp(
      static_cast<int>(std::lround(corner_area * height * width / ch)), 1, width);
  std::vector<Sample> out;
  for (int i = 0; i < count; ++i) {
    RngStream rng(seed, Purpose::kFixture, {2, static_cast<std::uint64_t>(i)});
    RefMap map(height, width);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        map.at(r, c) = (i % 2 == 0 && r < ch && c < cw) ? ClassId{2} : ClassId{1};
      }
    }
    Sample sample{sample_id(i), paint(map, 3, rng), label_from_map(map, 2), std::nullopt, std::nullopt};
    sample.map = std::move(map);
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<Sample> make_uniform_samples(int count, int height, int width, int num_classes,
                                         std::uint64_t seed) {
  if (count < 2 || height < 1 || width < 1 || num_classes < 1) {
    throw ConfigError("uniform fixture: need count >= 2 and positive size and classes");
  }
  std::vector<Sample> out;
  for (int i = 0; i < count; ++i) {
    RngStream rng(seed, Purpose::kFixture, {3, static_cast<std::uint64_t>(i)});
    const auto cls = static_cast<ClassId>(1 + rng.below(static_cast<std::uint64_t>(num_classes)));
    RefMap map(height, width);
    std::fill(map.data().begin(), map.data().end(), cls);
    Sample sample{sample_id(i), paint(map, 3, rng), label_from_map(map, num_classes), std::nullopt,
                  std::nullopt};
    sample.map = std::move(map);
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<MapRecord> to_map_records(const std::vector<Sample>& samples) {
  std::vector<MapRecord> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (!s.map) throw DatasetError("sample '" + s.id + "' has no reference map");
    out.push_back({s.id, *s.map, s.label});
  }
  return out;
}

}  // namespace cutmixlp
