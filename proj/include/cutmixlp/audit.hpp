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

// Label-noise audit of naive pairing.
//
// Each trial pairs two distinct maps with a freshly drawn box pair and takes
// the propagated map label as ground truth. Two naive policies are scored:
// keep-y1 (the first label unchanged) and union (y1 | y2).
//   subtractive: a ground-truth class the naive label lacks;
//   additive:    a naive-label class missing from the ground truth.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutmixlp/boxgen.hpp"
#include "cutmixlp/cutmix.hpp"

namespace cutmixlp {

struct AuditConfig {
  BoxSizeRange box_range;
  std::uint64_t seed = 0;
  std::int64_t trials = 10'000;
};

struct PolicyNoise {
  std::int64_t subtractive_trials = 0;
  std::int64_t additive_trials = 0;
  std::int64_t erased_classes = 0;
  std::int64_t added_classes = 0;

  double subtractive_rate(std::int64_t trials) const;
  double additive_rate(std::int64_t trials) const;
};

struct AuditReport {
  std::int64_t trials = 0;
  BoxSizeRange box_range;
  PolicyNoise keep_first;
  PolicyNoise union_labels;
};

/// Noise of one naive label against the ground truth: {erased, added}.
std::pair<int, int> label_noise(const MultiLabel& naive, const MultiLabel& truth);

/// Needs at least two records.
AuditReport audit_label_noise(const std::vector<MapRecord>& records, const AuditConfig& config);

nlohmann::json to_json(const AuditReport& report);
std::string format_table(const AuditReport& report);

}  // namespace cutmixlp
