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

#include <cmath>
#include <cstdlib>
#include <map>

#include "cutmixlp/pipeline.hpp"
#include "cutmixlp/synthetic.hpp"

using namespace cutmixlp;

namespace {

InMemorySource small_source(int count, int size = 12, std::uint64_t seed = 0) {
  FixtureOptions o;
  o.count = count;
  o.height = size;
  o.width = size;
  o.seed = seed;
  return InMemorySource(make_voronoi_samples(o), o.num_classes);
}

std::vector<Batch> run_all(const SampleSource& source, const PipelineConfig& cfg) {
  std::vector<Batch> out;
  run_pipeline(source, cfg, [&](Batch&& b) { out.push_back(std::move(b)); });
  return out;
}

std::vector<std::byte> stream_bytes(const std::vector<Batch>& batches) {
  std::vector<std::byte> out;
  for (const auto& b : batches) {
    const auto bytes = serialize_batch(b);
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  return out;
}

}  // namespace

TEST_CASE("config validation and JSON") {
  PipelineConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.batch_size == 300);
  cfg.p = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.p = 0.5;
  cfg.batch_size = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.p = 0.0;
  CHECK_NOTHROW(cfg.validate());

  PipelineConfig parsed;
  apply_json(parsed, {{"policy", "lp_xai"}, {"box_range", "0.1-0.3"}, {"p", 0.25}, {"seed", 9},
                      {"batch_size", 16}, {"partner_mode", "dataset"}});
  CHECK(parsed.policy == LabelPolicy::kLpXai);
  CHECK(parsed.box_range == BoxSizeRange{0.1, 0.3});
  CHECK(parsed.p == 0.25);
  CHECK(parsed.seed == 9);
  CHECK(parsed.partner_mode == PartnerMode::kDataset);
  PipelineConfig again;
  apply_json(again, to_json(parsed));
  CHECK(to_json(again) == to_json(parsed));
  CHECK_THROWS_AS(apply_json(parsed, {{"alpha", 1}}), ConfigError);
}

TEST_CASE("p = 0 passes every sample through unchanged") {
  const auto src = small_source(25);
  PipelineConfig cfg;
  cfg.p = 0.0;
  cfg.batch_size = 10;
  const auto batches = run_all(src, cfg);
  REQUIRE(batches.size() == 3);
  std::size_t i = 0;
  for (const auto& b : batches) {
    Batch expected{b.epoch, b.index, {}};
    for (const auto& item : b.items) {
      const auto& s = src.samples()[i++];
      expected.items.push_back({s.id, s.image, s.label, s.map, s.masks, std::nullopt});
      CHECK(item.id == s.id);
    }
    CHECK(serialize_batch(b) == serialize_batch(expected));
    CHECK(b.replaced() == 0);
  }
  CHECK(i == 25);
}

TEST_CASE("p = 1 with a batch of two pairs the samples with each other") {
  const auto src = small_source(2);
  PipelineConfig cfg;
  cfg.p = 1.0;
  cfg.batch_size = 2;
  const auto batches = run_all(src, cfg);
  REQUIRE(batches.size() == 1);
  REQUIRE(batches[0].items.size() == 2);
  CHECK(batches[0].items[0].provenance->second_id == src.samples()[1].id);
  CHECK(batches[0].items[1].provenance->second_id == src.samples()[0].id);
}

TEST_CASE("a batch of one cannot be augmented") {
  const auto src = small_source(1);
  PipelineConfig cfg;
  cfg.p = 1.0;
  cfg.batch_size = 2;
  CHECK_THROWS_AS(run_all(src, cfg), ConfigError);
  cfg.p = 0.0;
  CHECK(run_all(src, cfg).size() == 1);
}

TEST_CASE("replacement count follows p") {
  FixtureOptions o;
  o.count = 10000;
  o.height = 4;
  o.width = 4;
  o.with_masks = false;
  const InMemorySource src(make_voronoi_samples(o), o.num_classes);
  PipelineConfig cfg;
  cfg.p = 0.5;
  cfg.seed = 42;
  cfg.box_range = {0.25, 0.75};
  std::size_t replaced = 0;
  std::size_t total = 0;
  run_pipeline(src, cfg, [&](Batch&& b) {
    replaced += b.replaced();
    total += b.items.size();
    for (const auto& item : b.items) {
      if (item.provenance) REQUIRE(item.provenance->first_id != item.provenance->second_id);
    }
  });
  CHECK(total == 10000);
  CHECK(std::abs(static_cast<double>(replaced) - 5000.0) <= 3 * std::sqrt(10000 * 0.25));
}

TEST_CASE("stream is independent of the worker count") {
  const auto src = small_source(230, 16, 3);
  PipelineConfig cfg;
  cfg.batch_size = 20;
  cfg.seed = 17;
  const auto one = stream_bytes(run_all(src, cfg));
  cfg.workers = 8;
  const auto eight = stream_bytes(run_all(src, cfg));
  CHECK(one == eight);
  cfg.seed = 18;
  CHECK(stream_bytes(run_all(src, cfg)) != one);
}

TEST_CASE("changing p only changes which positions are replaced") {
  const auto src = small_source(120, 16, 4);
  PipelineConfig lo;
  lo.batch_size = 40;
  lo.p = 0.3;
  lo.seed = 5;
  PipelineConfig hi = lo;
  hi.p = 0.8;
  const auto a = run_all(src, lo);
  const auto b = run_all(src, hi);
  int both = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    REQUIRE(a[k].items.size() == b[k].items.size());
    for (std::size_t i = 0; i < a[k].items.size(); ++i) {
      const auto& x = a[k].items[i];
      const auto& y = b[k].items[i];
      // The coin is a single uniform draw compared against p.
      if (x.provenance) CHECK(y.provenance.has_value());
      if (x.provenance && y.provenance) {
        ++both;
        CHECK(*x.provenance == *y.provenance);
        CHECK(x.image == y.image);
      }
    }
  }
  CHECK(both > 0);
}

TEST_CASE("dataset-wide partner mode draws from every sample") {
  const auto src = small_source(30, 12, 6);
  PipelineConfig cfg;
  cfg.p = 1.0;
  cfg.batch_size = 5;
  cfg.partner_mode = PartnerMode::kDataset;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < src.size(); ++i) index[src.samples()[i].id] = i;
  bool crossed = false;
  for (const auto& b : run_all(src, cfg)) {
    CHECK(b.items.size() == 5);
    for (const auto& item : b.items) {
      REQUIRE(item.provenance);
      CHECK(item.provenance->second_id != item.id);
      crossed |= index[item.provenance->second_id] / 5 != b.index;
    }
  }
  CHECK(crossed);
}

TEST_CASE("CUTMIXLP_THREADS sets the default worker count") {
  ::setenv("CUTMIXLP_THREADS", "3", 1);
  CHECK(default_workers() == 3);
  ::setenv("CUTMIXLP_THREADS", "zero", 1);
  CHECK_THROWS_AS(default_workers(), ConfigError);
  ::unsetenv("CUTMIXLP_THREADS");
  CHECK(default_workers() == 1);
}
