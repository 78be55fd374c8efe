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

// Batch pipeline.
//
// Samples are cut into consecutive batches. Within a batch each position is
// replaced with probability p by augment(sample, partner), the partner drawn
// uniformly from the other positions of the same batch. Three independent
// streams, keyed by (seed, epoch, batch, position), drive the replace coin, the
// partner index and the boxes; changing p therefore only changes which
// positions are replaced.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutmixlp/boxgen.hpp"
#include "cutmixlp/cutmix.hpp"
#include "cutmixlp/dataset.hpp"

namespace cutmixlp {

enum class PartnerMode { kBatch, kDataset };

const char* to_string(PartnerMode mode);
PartnerMode parse_partner_mode(const std::string& name);

struct PipelineConfig {
  LabelPolicy policy = LabelPolicy::kLpMap;
  BoxSizeRange box_range;
  double p = 0.5;
  double t_cam = 0.1;
  std::int64_t t_map = 10;
  bool smooth_map_readout = false;
  std::uint64_t seed = 0;
  int batch_size = 300;
  PartnerMode partner_mode = PartnerMode::kBatch;
  int workers = 1;
  std::uint64_t epoch = 0;

  void validate() const;
  LpConfig lp() const;
};

/// Overrides fields present in `doc`; unknown keys are rejected.
void apply_json(PipelineConfig& config, const nlohmann::json& doc);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
nlohmann::json to_json(const PipelineConfig& config);

/// Default worker count: CUTMIXLP_THREADS when set, else 1.
int default_workers();

struct BatchItem {
  std::string id;
  ImageRaster image;
  AnyLabel label;
  std::optional<RefMap> map;
  std::optional<MaskStack> masks;
  std::optional<Provenance> provenance;  // set iff replaced
};

struct Batch {
  std::uint64_t epoch = 0;
  std::uint64_t index = 0;
  std::vector<BatchItem> items;

  std::size_t replaced() const;
};

/// One batch. `batch` holds the samples at dataset positions
/// [offset, offset + batch.size()); `source` is consulted only in
/// PartnerMode::kDataset.
Batch augment_batch(std::span<const Sample> batch, const PipelineConfig& config,
                    std::uint64_t batch_index, const SampleSource* source = nullptr);

/// Runs every batch of one epoch and hands them to `sink` in batch order.
/// With config.workers > 1 batches are computed concurrently; the emitted
/// stream does not depend on the worker count.
void run_pipeline(const SampleSource& source, const PipelineConfig& config,
                  const std::function<void(Batch&&)>& sink);

/// Canonical byte encoding of a batch, used for determinism checks.
std::vector<std::byte> serialize_batch(const Batch& batch);

/// Number of batches for n samples.
std::size_t batch_count(std::size_t n, int batch_size);

}  // namespace cutmixlp
