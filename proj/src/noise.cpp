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

#include "cutmixlp/noise.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "cutmixlp/segments.hpp"

namespace cutmixlp {
namespace {

constexpr int kDy4[] = {-1, 1, 0, 0};
constexpr int kDx4[] = {0, 0, -1, 1};

constexpr std::array<std::pair<int, int>, 8> kDirectionSteps = {{
    {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1},
}};

/// Most frequent class in `counts` (index = class id), skipping void; lowest
/// id wins ties; void if nothing was counted.
ClassId mode_class(const std::map<ClassId, std::int64_t>& counts) {
  ClassId best = kVoid;
  std::int64_t best_count = 0;
  for (const auto& [cls, n] : counts) {
    if (cls != kVoid && n > best_count) {
      best = cls;
      best_count = n;
    }
  }
  return best;
}

}  // namespace

const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kMaskShift: return "mask_shift";
    case NoiseKind::kDilationErosion: return "dilation_erosion";
    case NoiseKind::kRectifyBorders: return "rectify_borders";
    case NoiseKind::kBorderDeformation: return "border_deformation";
    case NoiseKind::kSegmentSwap: return "segment_swap";
    case NoiseKind::kClassSwap: return "class_swap";
  }
  return "?";
}

NoiseKind parse_noise_kind(const std::string& name) {
  for (auto kind : {NoiseKind::kMaskShift, NoiseKind::kDilationErosion, NoiseKind::kRectifyBorders,
                    NoiseKind::kBorderDeformation, NoiseKind::kSegmentSwap,
                    NoiseKind::kClassSwap}) {
    if (name == to_string(kind)) return kind;
  }
  throw ConfigError("unknown noise kind '" + name + "'");
}

int default_magnitude(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kMaskShift: return 12;
    case NoiseKind::kDilationErosion: return 12;
    case NoiseKind::kRectifyBorders: return 4;
    case NoiseKind::kBorderDeformation: return 3;
    case NoiseKind::kSegmentSwap:
    case NoiseKind::kClassSwap: return 0;
  }
  return 0;
}

void NoiseSpec::validate() const {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ConfigError("noise fraction must lie in [0, 1]");
  switch (kind) {
    case NoiseKind::kMaskShift:
    case NoiseKind::kRectifyBorders:
      if (magnitude < 1) throw ConfigError(std::string(to_string(kind)) + ": magnitude must be >= 1");
      break;
    case NoiseKind::kDilationErosion:
    case NoiseKind::kBorderDeformation:
      if (magnitude < 0) throw ConfigError(std::string(to_string(kind)) + ": magnitude must be >= 0");
      break;
    case NoiseKind::kSegmentSwap:
    case NoiseKind::kClassSwap:
      break;
  }
}

const char* to_string(Direction direction) {
  static constexpr const char* kNames[] = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
  return kNames[static_cast<int>(direction)];
}

// ---------------------------------------------------------------- mask shift

RefMap translate_map(const RefMap& map, int drow, int dcol) {
  RefMap out(map.height(), map.width(), kVoid);
  for (int r = 0; r < map.height(); ++r) {
    const int src_r = r - drow;
    if (src_r < 0 || src_r >= map.height()) continue;
    for (int c = 0; c < map.width(); ++c) {
      const int src_c = c - dcol;
      if (src_c >= 0 && src_c < map.width()) out.at(r, c) = map.at(src_r, src_c);
    }
  }
  return out;
}

NoiseResult mask_shift(const RefMap& map, int max_shift, RngStream& rng) {
  if (max_shift < 1 || max_shift >= std::min(map.height(), map.width())) {
    throw ContractError("mask_shift: max shift " + std::to_string(max_shift) +
                        " must be in [1, min(H, W))");
  }
  const auto direction = static_cast<Direction>(rng.below(8));
  const auto shift = static_cast<int>(rng.uniform_int(1, max_shift));
  const auto [dy, dx] = kDirectionSteps[static_cast<int>(direction)];
  return {translate_map(map, dy * shift, dx * shift),
          {{"direction", to_string(direction)}, {"shift", shift}}};
}

// --------------------------------------------------------- dilation/erosion

RefMap dilate_class(const RefMap& map, ClassId cls, int iterations) {
  if (iterations < 0) throw ContractError("dilate_class: negative iteration count");
  RefMap current = map;
  for (int it = 0; it < iterations; ++it) {
    RefMap next = current;
    bool changed = false;
    for (int r = 0; r < map.height(); ++r) {
      for (int c = 0; c < map.width(); ++c) {
        if (current.at(r, c) == cls) continue;
        for (int k = 0; k < 4; ++k) {
          const int y = r + kDy4[k];
          const int x = c + kDx4[k];
          if (y >= 0 && y < map.height() && x >= 0 && x < map.width() && current.at(y, x) == cls) {
            next.at(r, c) = cls;
            changed = true;
            break;
          }
        }
      }
    }
    current = std::move(next);
    if (!changed) break;
  }
  return current;
}

RefMap erode_class(const RefMap& map, ClassId cls, int iterations) {
  if (iterations < 0) throw ContractError("erode_class: negative iteration count");
  RefMap current = map;
  for (int it = 0; it < iterations; ++it) {
    RefMap next = current;
    bool changed = false;
    for (int r = 0; r < map.height(); ++r) {
      for (int c = 0; c < map.width(); ++c) {
        if (current.at(r, c) != cls) continue;
        std::map<ClassId, std::int64_t> border;
        bool exposed = false;
        for (int k = 0; k < 4; ++k) {
          const int y = r + kDy4[k];
          const int x = c + kDx4[k];
          if (y < 0 || y >= map.height() || x < 0 || x >= map.width()) continue;
          const ClassId v = current.at(y, x);
          if (v != cls) {
            exposed = true;
            ++border[v];
          }
        }
        if (exposed) {
          next.at(r, c) = mode_class(border);
          changed = true;
        }
      }
    }
    current = std::move(next);
    if (!changed) break;
  }
  return current;
}

NoiseResult dilate_erode(const RefMap& map, int iterations, RngStream& rng) {
  const auto classes = present_classes(map);
  if (classes.empty()) throw ContractError("dilate_erode: map has no nonvoid class");
  if (iterations < 0) throw ContractError("dilate_erode: negative iteration count");
  const ClassId cls = classes[rng.below(classes.size())];
  const bool dilate = rng.below(2) == 0;
  RefMap out = dilate ? dilate_class(map, cls, iterations) : erode_class(map, cls, iterations);
  return {std::move(out),
          {{"class", cls}, {"op", dilate ? "dilate" : "erode"}, {"iterations", iterations}}};
}

// ---------------------------------------------------------- rectify borders

RefMap rectify_borders(const RefMap& map, int factor) {
  if (factor < 1 || factor > std::min(map.height(), map.width())) {
    throw ContractError("rectify_borders: factor " + std::to_string(factor) +
                        " must be in [1, min(H, W)]");
  }
  RefMap out(map.height(), map.width());
  for (int r = 0; r < map.height(); ++r) {
    const int src_r = (r / factor) * factor;
    for (int c = 0; c < map.width(); ++c) {
      out.at(r, c) = map.at(src_r, (c / factor) * factor);
    }
  }
  return out;
}

// ------------------------------------------------------- border deformation

NoiseResult border_deformation(const RefMap& map, int n_boxes, RngStream& rng) {
  if (n_boxes < 0) throw ContractError("border_deformation: negative box count");
  const int height = map.height();
  const int width = map.width();
  const double total = static_cast<double>(height) * width;
  RefMap out = map;
  nlohmann::json boxes = nlohmann::json::array();

  for (int i = 0; i < n_boxes; ++i) {
    // Target area uniform in [1%, 5%] of the image; aspect ratio within 1:2.
    const double fraction = 0.01 + 0.04 * rng.uniform01();
    const double area = std::max(1.0, fraction * total);
    const int lo_h = std::clamp(static_cast<int>(std::ceil(std::sqrt(area / 2.0))), 1, height);
    const int hi_h = std::clamp(static_cast<int>(std::floor(std::sqrt(area * 2.0))), lo_h, height);
    const auto box_h = static_cast<int>(rng.uniform_int(lo_h, hi_h));
    const int box_w = std::clamp(static_cast<int>(std::lround(area / box_h)), 1, width);
    const auto row0 = static_cast<int>(rng.uniform_int(0, height - box_h));
    const auto col0 = static_cast<int>(rng.uniform_int(0, width - box_w));

    std::vector<ClassId> overlapped;
    for (int r = row0; r < row0 + box_h; ++r) {
      for (int c = col0; c < col0 + box_w; ++c) {
        const ClassId v = out.at(r, c);
        if (v != kVoid && std::find(overlapped.begin(), overlapped.end(), v) == overlapped.end()) {
          overlapped.push_back(v);
        }
      }
    }
    ClassId assigned = kVoid;
    if (overlapped.size() >= 2) {
      std::sort(overlapped.begin(), overlapped.end());
      assigned = overlapped[rng.below(overlapped.size())];
      for (int r = row0; r < row0 + box_h; ++r) {
        for (int c = col0; c < col0 + box_w; ++c) out.at(r, c) = assigned;
      }
    }
    boxes.push_back({{"box", {row0, col0, row0 + box_h, col0 + box_w}},
                     {"target_area", fraction},
                     {"class", assigned}});
  }
  return {std::move(out), {{"boxes", std::move(boxes)}}};
}

// -------------------------------------------------------------- segment swap

NoiseResult segment_swap(const RefMap& map, RngStream& rng) {
  if (present_classes(map).size() < 2) {
    throw ContractError("segment_swap: map needs at least two classes");
  }
  const int height = map.height();
  const int width = map.width();
  const auto labels = label_segments(map);
  const auto chosen = static_cast<std::int32_t>(rng.below(labels.segments.size()));
  const Segment segment = labels.segments[static_cast<std::size_t>(chosen)];

  // Vacate the segment, filling it with the mode of its bordering classes.
  std::map<ClassId, std::int64_t> border;
  double centroid_r = 0.0;
  double centroid_c = 0.0;
  std::vector<std::size_t> outside;
  outside.reserve(map.size());
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (labels.index.at(0, r, c) != chosen) {
        outside.push_back(static_cast<std::size_t>(r) * width + c);
        continue;
      }
      centroid_r += r;
      centroid_c += c;
      for (int k = 0; k < 4; ++k) {
        const int y = r + kDy4[k];
        const int x = c + kDx4[k];
        if (y >= 0 && y < height && x >= 0 && x < width && labels.index.at(0, y, x) != chosen) {
          ++border[map.at(y, x)];
        }
      }
    }
  }
  const ClassId fill = mode_class(border);
  RefMap out = map;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (labels.index.at(0, r, c) == chosen) out.at(r, c) = fill;
    }
  }

  // Grow a connected random blob of the same size from a seed outside the
  // original segment: repeatedly absorb a uniformly chosen frontier pixel.
  const std::size_t seed = outside[rng.below(outside.size())];
  std::vector<std::uint8_t> state(map.size(), 0);  // 1 = frontier, 2 = blob
  std::vector<std::size_t> frontier{seed};
  state[seed] = 1;
  std::int64_t grown = 0;
  while (grown < segment.pixels && !frontier.empty()) {
    const std::size_t pick = rng.below(frontier.size());
    const std::size_t pixel = frontier[pick];
    frontier[pick] = frontier.back();
    frontier.pop_back();
    state[pixel] = 2;
    ++grown;
    const int r = static_cast<int>(pixel / width);
    const int c = static_cast<int>(pixel % width);
    out.at(r, c) = segment.cls;
    for (int k = 0; k < 4; ++k) {
      const int y = r + kDy4[k];
      const int x = c + kDx4[k];
      if (y < 0 || y >= height || x < 0 || x >= width) continue;
      const std::size_t next = static_cast<std::size_t>(y) * width + x;
      if (state[next] == 0) {
        state[next] = 1;
        frontier.push_back(next);
      }
    }
  }

  const auto n = static_cast<double>(segment.pixels);
  return {std::move(out),
          {{"class", segment.cls},
           {"pixels", segment.pixels},
           {"placed", grown},
           {"fill", fill},
           {"from_centroid", {centroid_r / n, centroid_c / n}},
           {"seed", {seed / width, seed % width}}}};
}

// ---------------------------------------------------------------- class swap

ClassSwapResult class_swap(const std::vector<RefMap>& maps, const std::vector<MultiLabel>& labels,
                           double fraction, RngStream& rng) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ContractError("class_swap: f outside [0, 1]");
  if (maps.size() != labels.size()) throw ContractError("class_swap: maps and labels differ in count");

  ClassSwapResult result{maps, labels, {}, 0};
  if (maps.empty()) return result;
  const int num_classes = labels.front().num_classes();

  // Census: every segment of every map, in map order.
  std::vector<SegmentLabels> census;
  std::vector<std::pair<std::size_t, std::int32_t>> all_segments;
  census.reserve(maps.size());
  for (std::size_t m = 0; m < maps.size(); ++m) {
    census.push_back(label_segments(maps[m]));
    for (std::size_t s = 0; s < census.back().segments.size(); ++s) {
      all_segments.emplace_back(m, static_cast<std::int32_t>(s));
    }
  }
  result.total_segments = static_cast<std::int64_t>(all_segments.size());
  const std::size_t k = exact_fraction_count(fraction, all_segments.size());
  if (k > 0 && num_classes < 2) throw ContractError("class_swap: needs at least two classes");

  // Partial Fisher-Yates picks k distinct segments.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(all_segments.size() - i);
    std::swap(all_segments[i], all_segments[j]);
  }
  std::vector<std::pair<std::size_t, std::int32_t>> picked(all_segments.begin(),
                                                            all_segments.begin() + k);
  std::sort(picked.begin(), picked.end());

  std::vector<std::uint8_t> touched(maps.size(), 0);
  for (const auto& [m, s] : picked) {
    const auto& seg_labels = census[m];
    const ClassId old_class = seg_labels.segments[static_cast<std::size_t>(s)].cls;
    auto new_class = static_cast<ClassId>(rng.uniform_int(1, num_classes - 1));
    if (new_class >= old_class) ++new_class;
    RefMap& out = result.maps[m];
    const auto index = seg_labels.index.data();
    auto values = out.data();
    for (std::size_t p = 0; p < index.size(); ++p) {
      if (index[p] == s) values[p] = new_class;
    }
    touched[m] = 1;
    result.changes.push_back(
        {m, old_class, new_class, seg_labels.segments[static_cast<std::size_t>(s)].pixels});
  }
  for (std::size_t m = 0; m < maps.size(); ++m) {
    if (touched[m]) result.labels[m] = readout_phi(result.maps[m], num_classes);
  }
  return result;
}

// --------------------------------------------------------------------- suite

std::size_t exact_fraction_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

nlohmann::json to_json(const NoiseManifestEntry& entry) {
  return {{"id", entry.id}, {"kind", to_string(entry.kind)}, {"params", entry.params}};
}

namespace {

NoiseResult apply_kernel(const RefMap& map, const NoiseSpec& spec, RngStream& rng) {
  switch (spec.kind) {
    case NoiseKind::kMaskShift: return mask_shift(map, spec.magnitude, rng);
    case NoiseKind::kDilationErosion: return dilate_erode(map, spec.magnitude, rng);
    case NoiseKind::kRectifyBorders:
      return {rectify_borders(map, spec.magnitude), {{"factor", spec.magnitude}}};
    case NoiseKind::kBorderDeformation: return border_deformation(map, spec.magnitude, rng);
    case NoiseKind::kSegmentSwap: return segment_swap(map, rng);
    case NoiseKind::kClassSwap: break;
  }
  throw ContractError("apply_kernel: class_swap is a dataset-level corruption");
}

NoiseSuiteResult apply_class_swap(const std::vector<MapRecord>& records, const NoiseSpec& spec,
                                  std::uint64_t seed) {
  std::vector<RefMap> maps;
  std::vector<MultiLabel> labels;
  for (const auto& record : records) {
    maps.push_back(record.map);
    labels.push_back(record.label);
  }
  RngStream rng(seed, Purpose::kClassSwap);
  auto swapped = class_swap(maps, labels, spec.fraction, rng);

  NoiseSuiteResult result{records, {}};
  std::map<std::size_t, nlohmann::json> per_map;
  for (const auto& change : swapped.changes) {
    per_map[change.map_index].push_back(
        {{"old", change.old_class}, {"new", change.new_class}, {"pixels", change.pixels}});
  }
  for (std::size_t m = 0; m < records.size(); ++m) {
    result.records[m].map = std::move(swapped.maps[m]);
    result.records[m].label = std::move(swapped.labels[m]);
  }
  for (auto& [m, segments] : per_map) {
    result.manifest.push_back({records[m].id, NoiseKind::kClassSwap,
                               {{"segments", std::move(segments)},
                                {"total_segments", swapped.total_segments}}});
  }
  return result;
}

}  // namespace

NoiseSuiteResult apply_noise_suite(const std::vector<MapRecord>& records, const NoiseSpec& spec,
                                   std::uint64_t seed, int workers) {
  spec.validate();
  if (spec.kind == NoiseKind::kClassSwap) return apply_class_swap(records, spec, seed);

  const std::size_t k = exact_fraction_count(spec.fraction, records.size());
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  RngStream select(seed, Purpose::kNoiseSelect);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(order[i], order[i + select.below(order.size() - i)]);
  }
  std::vector<std::size_t> chosen(order.begin(), order.begin() + k);
  std::sort(chosen.begin(), chosen.end());

  NoiseSuiteResult result{records, {}};
  std::vector<nlohmann::json> params(chosen.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < chosen.size(); i = next++) {
      try {
        const auto& record = records[chosen[i]];
        RngStream rng(seed, Purpose::kNoiseMap, {fnv1a64(record.id)});
        auto noisy = apply_kernel(record.map, spec, rng);
        result.records[chosen[i]].map = std::move(noisy.map);
        params[i] = std::move(noisy.params);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = chosen.size();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(chosen.size())));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& thread : pool) thread.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < chosen.size(); ++i) {
    result.manifest.push_back({records[chosen[i]].id, spec.kind, std::move(params[i])});
  }
  return result;
}

// ----------------------------------------------------------------------- IoU

IouReport map_iou(const RefMap& clean, const RefMap& noisy) {
  if (!clean.same_shape(noisy)) throw ContractError("map_iou: maps differ in shape");
  const std::size_t n_classes =
      static_cast<std::size_t>(std::max(clean.max_class(), noisy.max_class())) + 1;
  std::vector<std::int64_t> inter(n_classes, 0), in_clean(n_classes, 0), in_noisy(n_classes, 0);
  const auto a = clean.data();
  const auto b = noisy.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++in_clean[a[i]];
    ++in_noisy[b[i]];
    if (a[i] == b[i]) ++inter[a[i]];
  }
  IouReport report;
  double sum = 0.0;
  for (std::size_t cls = 1; cls < n_classes; ++cls) {
    const std::int64_t uni = in_clean[cls] + in_noisy[cls] - inter[cls];
    if (uni == 0) continue;
    const double iou = static_cast<double>(inter[cls]) / static_cast<double>(uni);
    report.per_class.emplace_back(static_cast<ClassId>(cls), iou);
    sum += iou;
  }
  report.mean = report.per_class.empty() ? 1.0 : sum / static_cast<double>(report.per_class.size());
  return report;
}

double mean_dataset_iou(const std::vector<MapRecord>& clean, const std::vector<MapRecord>& noisy) {
  if (clean.size() != noisy.size()) throw ContractError("mean_dataset_iou: record counts differ");
  if (clean.empty()) return 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) sum += map_iou(clean[i].map, noisy[i].map).mean;
  return sum / static_cast<double>(clean.size());
}

}  // namespace cutmixlp
