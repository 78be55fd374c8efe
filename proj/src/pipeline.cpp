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

#include "cutmixlp/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "cutmixlp/tensor_io.hpp"

namespace cutmixlp {
using nlohmann::json;

const char* to_string(PartnerMode mode) {
  return mode == PartnerMode::kBatch ? "batch" : "dataset";
}

PartnerMode parse_partner_mode(const std::string& name) {
  if (name == "batch") return PartnerMode::kBatch;
  if (name == "dataset") return PartnerMode::kDataset;
  throw ConfigError("unknown partner mode '" + name + "' (expected batch or dataset)");
}

void PipelineConfig::validate() const {
  lp().validate();
  box_range.validate();
  if (!(t_cam >= 0.0 && t_cam <= 1.0)) throw ConfigError("t_cam must be in [0, 1]");
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
  if (p > 0.0 && batch_size < 2 && partner_mode == PartnerMode::kBatch) {
    throw ConfigError("batch_size must be at least 2 when p > 0 (no partner in a batch of one)");
  }
  if (workers < 1) throw ConfigError("workers must be positive");
}

LpConfig PipelineConfig::lp() const {
  LpConfig out;
  out.policy = policy;
  out.t_map = t_map;
  out.smooth_map_readout = smooth_map_readout;
  out.p = p;
  return out;
}

void apply_json(PipelineConfig& config, const json& doc) {
  if (!doc.is_object()) throw ConfigError("pipeline config must be a JSON object");
  static const std::set<std::string> kKnown = {
      "policy", "box_range", "p", "t_cam", "t_map", "smooth_map_readout", "seed",
      "batch_size", "partner_mode", "workers", "epoch"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKnown.count(key)) throw ConfigError("unknown pipeline config key '" + key + "'");
  }
  try {
    if (doc.contains("policy")) config.policy = parse_policy(doc["policy"].get<std::string>());
    if (doc.contains("box_range")) {
      const auto& r = doc["box_range"];
      if (r.is_string()) {
        config.box_range = parse_box_range(r.get<std::string>());
      } else {
        config.box_range = {r.at(0).get<double>(), r.at(1).get<double>()};
      }
    }
    if (doc.contains("p")) config.p = doc["p"].get<double>();
    if (doc.contains("t_cam")) config.t_cam = doc["t_cam"].get<double>();
    if (doc.contains("t_map")) config.t_map = doc["t_map"].get<std::int64_t>();
    if (doc.contains("smooth_map_readout")) {
      config.smooth_map_readout = doc["smooth_map_readout"].get<bool>();
    }
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("batch_size")) config.batch_size = doc["batch_size"].get<int>();
    if (doc.contains("partner_mode")) {
      config.partner_mode = parse_partner_mode(doc["partner_mode"].get<std::string>());
    }
    if (doc.contains("workers")) config.workers = doc["workers"].get<int>();
    if (doc.contains("epoch")) config.epoch = doc["epoch"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("pipeline config: ") + e.what());
  }
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  json doc;
  try {
    doc = json::parse(text.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  PipelineConfig config;
  apply_json(config, doc);
  return config;
}

json to_json(const PipelineConfig& c) {
  return {{"policy", to_string(c.policy)},
          {"box_range", {c.box_range.min_area, c.box_range.max_area}},
          {"p", c.p},
          {"t_cam", c.t_cam},
          {"t_map", c.t_map},
          {"smooth_map_readout", c.smooth_map_readout},
          {"seed", c.seed},
          {"batch_size", c.batch_size},
          {"partner_mode", to_string(c.partner_mode)},
          {"workers", c.workers},
          {"epoch", c.epoch}};
}

int default_workers() {
  if (const char* env = std::getenv("CUTMIXLP_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1 && n <= 1024) return static_cast<int>(n);
    throw ConfigError(std::string("CUTMIXLP_THREADS must be an integer in 1..1024, got '") + env + "'");
  }
  return 1;
}

std::size_t Batch::replaced() const {
  return static_cast<std::size_t>(std::count_if(
      items.begin(), items.end(), [](const BatchItem& item) { return item.provenance.has_value(); }));
}

std::size_t batch_count(std::size_t n, int batch_size) {
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
  const auto b = static_cast<std::size_t>(batch_size);
  return (n + b - 1) / b;
}

Batch augment_batch(std::span<const Sample> batch, const PipelineConfig& config,
                    std::uint64_t batch_index, const SampleSource* source) {
  config.validate();
  const LpConfig lp = config.lp();
  const std::size_t n = batch.size();
  const bool dataset_mode = config.partner_mode == PartnerMode::kDataset;
  if (dataset_mode && source == nullptr) {
    throw ConfigError("partner mode 'dataset' needs the sample source");
  }
  const std::size_t pool = dataset_mode ? source->size() : n;
  const std::uint64_t offset = batch_index * static_cast<std::uint64_t>(config.batch_size);

  Batch out{config.epoch, batch_index, {}};
  out.items.reserve(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const Sample& sample = batch[pos];
    const std::uint64_t e = config.epoch;
    RngStream coin(config.seed, Purpose::kReplaceCoin, {e, batch_index, pos});
    if (!(config.p > 0.0 && coin.bernoulli(config.p))) {
      out.items.push_back({sample.id, sample.image, sample.label, sample.map, sample.masks, std::nullopt});
      continue;
    }
    if (pool < 2) throw ConfigError("batch of size 1 with p > 0: no partner available");
    RngStream partner_rng(config.seed, Purpose::kPartner, {e, batch_index, pos});
    const std::size_t self = dataset_mode ? static_cast<std::size_t>(offset + pos) : pos;
    std::size_t j = static_cast<std::size_t>(partner_rng.below(pool - 1));
    if (j >= self) ++j;

    Sample loaded;
    const Sample* partner = nullptr;
    if (dataset_mode) {
      loaded = source->get(j);
      partner = &loaded;
    } else {
      partner = &batch[j];
    }
    RngStream box_rng(config.seed, Purpose::kBoxes, {e, batch_index, pos});
    auto aug = augment(sample, *partner, lp, config.box_range, box_rng);
    out.items.push_back({sample.id, std::move(aug.image), std::move(aug.label), std::move(aug.map),
                         std::move(aug.masks), std::move(aug.provenance)});
  }
  return out;
}

namespace {

Batch compute_batch(const SampleSource& source, const PipelineConfig& config, std::size_t b) {
  const auto size = static_cast<std::size_t>(config.batch_size);
  const std::size_t begin = b * size;
  const std::size_t end = std::min(source.size(), begin + size);
  std::vector<Sample> samples;
  samples.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) samples.push_back(source.get(i));
  return augment_batch(samples, config, b, &source);
}

}  // namespace

void run_pipeline(const SampleSource& source, const PipelineConfig& config,
                  const std::function<void(Batch&&)>& sink) {
  config.validate();
  const std::size_t batches = batch_count(source.size(), config.batch_size);
  const auto workers = static_cast<std::size_t>(config.workers);
  if (workers == 1) {
    for (std::size_t b = 0; b < batches; ++b) sink(compute_batch(source, config, b));
    return;
  }
  // Waves of `workers` batches; each wave is emitted in sequence order.
  for (std::size_t first = 0; first < batches; first += workers) {
    const std::size_t count = std::min(workers, batches - first);
    std::vector<std::optional<Batch>> results(count);
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> threads;
    threads.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      threads.emplace_back([&, k] {
        try {
          results[k] = compute_batch(source, config, first + k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (std::size_t k = 0; k < count; ++k) {
      if (errors[k]) std::rethrow_exception(errors[k]);
      sink(std::move(*results[k]));
    }
  }
}

// ------------------------------------------------------------- serialization

namespace {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<std::byte>(v)); }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) {
    const auto u = static_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(u >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    for (char c : s) u8(static_cast<std::uint8_t>(c));
  }
  void blob(const std::vector<std::byte>& bytes) {
    u64(bytes.size());
    out_.insert(out_.end(), bytes.begin(), bytes.end());
  }
  void box(const Box& b) {
    i32(b.row0);
    i32(b.col0);
    i32(b.row1);
    i32(b.col1);
  }
  std::vector<std::byte> take() { return std::move(out_); }

 private:
  std::vector<std::byte> out_;
};

}  // namespace

std::vector<std::byte> serialize_batch(const Batch& batch) {
  ByteWriter w;
  for (char c : std::string("CMLPBATCH1")) w.u8(static_cast<std::uint8_t>(c));
  w.u64(batch.epoch);
  w.u64(batch.index);
  w.u64(batch.items.size());
  for (const auto& item : batch.items) {
    w.str(item.id);
    w.blob(encode_tensor(to_tensor(item.image)));
    if (const auto* hard = std::get_if<MultiLabel>(&item.label)) {
      w.u8(0);
      w.u64(hard->bits().size());
      for (auto bit : hard->bits()) w.u8(bit);
    } else {
      const auto& soft = std::get<SoftLabel>(item.label);
      w.u8(1);
      w.u64(soft.weights().size());
      for (double v : soft.weights()) w.f64(v);
    }
    w.u8(item.map.has_value());
    if (item.map) w.blob(encode_tensor(to_tensor(*item.map)));
    w.u8(item.masks.has_value());
    if (item.masks) w.blob(encode_tensor(to_tensor(*item.masks)));
    w.u8(item.provenance.has_value());
    if (item.provenance) {
      w.str(item.provenance->first_id);
      w.str(item.provenance->second_id);
      w.box(item.provenance->box1);
      w.box(item.provenance->box2);
      w.u8(item.provenance->empty_label);
    }
  }
  return w.take();
}

}  // namespace cutmixlp
