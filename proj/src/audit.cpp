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

#include "cutmixlp/audit.hpp"

#include <cstdio>

namespace cutmixlp {

double PolicyNoise::subtractive_rate(std::int64_t trials) const {
  return trials > 0 ? static_cast<double>(subtractive_trials) / static_cast<double>(trials) : 0.0;
}

double PolicyNoise::additive_rate(std::int64_t trials) const {
  return trials > 0 ? static_cast<double>(additive_trials) / static_cast<double>(trials) : 0.0;
}

std::pair<int, int> label_noise(const MultiLabel& naive, const MultiLabel& truth) {
  if (naive.num_classes() != truth.num_classes()) {
    throw ContractError("label_noise: labels differ in length");
  }
  int erased = 0;
  int added = 0;
  for (int c = 1; c <= truth.num_classes(); ++c) {
    const auto cls = static_cast<ClassId>(c);
    if (truth.has(cls) && !naive.has(cls)) ++erased;
    if (naive.has(cls) && !truth.has(cls)) ++added;
  }
  return {erased, added};
}

namespace {

void score(PolicyNoise& noise, const MultiLabel& naive, const MultiLabel& truth) {
  const auto [erased, added] = label_noise(naive, truth);
  noise.subtractive_trials += erased > 0;
  noise.additive_trials += added > 0;
  noise.erased_classes += erased;
  noise.added_classes += added;
}

}  // namespace

AuditReport audit_label_noise(const std::vector<MapRecord>& records, const AuditConfig& config) {
  if (records.size() < 2) {
    throw DatasetError("audit needs at least two samples with reference maps");
  }
  if (config.trials < 1) throw ConfigError("audit trials must be positive");
  config.box_range.validate();
  const int h = records.front().map.height();
  const int w = records.front().map.width();
  const int num_classes = records.front().label.num_classes();
  for (const auto& r : records) {
    if (r.map.height() != h || r.map.width() != w || r.label.num_classes() != num_classes) {
      throw DatasetError("audit: sample '" + r.id + "' differs in map size or label length");
    }
  }

  AuditReport report;
  report.trials = config.trials;
  report.box_range = config.box_range;
  for (std::int64_t t = 0; t < config.trials; ++t) {
    RngStream rng(config.seed, Purpose::kAudit, {static_cast<std::uint64_t>(t)});
    const auto i = static_cast<std::size_t>(rng.below(records.size()));
    auto j = static_cast<std::size_t>(rng.below(records.size() - 1));
    if (j >= i) ++j;
    const Box box1 = gen_boxes(config.box_range, 1, h, w, rng).front();
    const Box box2 = sample_partner_box(box1, h, w, rng);
    const auto truth =
        readout_phi(compose_map(records[i].map, records[j].map, box1, box2), num_classes);
    score(report.keep_first, records[i].label, truth);
    score(report.union_labels, records[i].label | records[j].label, truth);
  }
  return report;
}

nlohmann::json to_json(const AuditReport& r) {
  auto policy = [&](const char* name, const PolicyNoise& n) {
    const auto trials = static_cast<double>(r.trials);
    return nlohmann::json{{"policy", name},
                          {"trials", r.trials},
                          {"box_range", to_string(r.box_range)},
                          {"subtractive_rate", n.subtractive_rate(r.trials)},
                          {"additive_rate", n.additive_rate(r.trials)},
                          {"mean_erased_classes", static_cast<double>(n.erased_classes) / trials},
                          {"mean_added_classes", static_cast<double>(n.added_classes) / trials}};
  };
  return nlohmann::json::array({policy("keep_y1", r.keep_first), policy("union", r.union_labels)});
}

std::string format_table(const AuditReport& r) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %-9s %8s %12s %10s %12s %10s\n", "policy", "range",
                "trials", "subtractive", "additive", "mean_erased", "mean_added");
  out += line;
  for (const auto& [name, n] : {std::pair<const char*, const PolicyNoise*>{"keep_y1", &r.keep_first},
                                {"union", &r.union_labels}}) {
    std::snprintf(line, sizeof line, "%-8s %-9s %8lld %12.4f %10.4f %12.4f %10.4f\n", name,
                  to_string(r.box_range).c_str(), static_cast<long long>(r.trials),
                  n->subtractive_rate(r.trials), n->additive_rate(r.trials),
                  static_cast<double>(n->erased_classes) / static_cast<double>(r.trials),
                  static_cast<double>(n->added_classes) / static_cast<double>(r.trials));
    out += line;
  }
  return out;
}

}  // namespace cutmixlp
