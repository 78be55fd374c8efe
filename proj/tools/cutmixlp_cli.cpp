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

// cutmixlp: command-line front end.
//
//   augment         run the batch pipeline over a dataset
//   simulate-noise  corrupt reference maps and report IoU
//   audit           label-noise rates of naive CutMix
//   gen-boxes       print boxes from the box generator
//   validate        load and check a dataset
//   make-fixture    write a synthetic dataset

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cutmixlp/audit.hpp"
#include "cutmixlp/boxgen.hpp"
#include "cutmixlp/dataset.hpp"
#include "cutmixlp/error.hpp"
#include "cutmixlp/noise.hpp"
#include "cutmixlp/pipeline.hpp"
#include "cutmixlp/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cutmixlp;

namespace {

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json box_json(const Box& b) { return json::array({b.row0, b.col0, b.row1, b.col1}); }

class LineWriter {
 public:
  explicit LineWriter(const fs::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw DatasetError("cannot write " + path.string());
  }
  void write(const std::string& line) { out_ << line << '\n'; }

 private:
  std::ofstream out_;
};

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void print_warnings(const Dataset& ds) {
  for (const auto& w : ds.warnings()) std::cerr << "warning: " << w << '\n';
}

// augment

struct AugmentArgs {
  fs::path manifest;
  fs::path config;
  fs::path out;
  json overrides = json::object();
};

int cmd_augment(const AugmentArgs& a) {
  PipelineConfig cfg;
  cfg.workers = default_workers();
  if (!a.config.empty()) apply_json(cfg, read_json_file(a.config));
  apply_json(cfg, a.overrides);
  cfg.validate();

  const Dataset ds = Dataset::load(a.manifest, LoadOptions{cfg.t_cam});
  print_warnings(ds);
  if (cfg.policy == LabelPolicy::kLpMap && !ds.has_maps()) {
    throw DatasetError("policy lp_map needs a reference map for every sample");
  }
  if (cfg.policy == LabelPolicy::kLpXai && !ds.has_masks()) {
    throw DatasetError("policy lp_xai needs a heatmap or mask stack for every sample");
  }

  fs::create_directories(a.out);
  const auto& m = ds.manifest();
  DatasetWriter writer(a.out, m.num_classes, m.geometry, m.class_names);
  LineWriter provenance(a.out / "provenance.jsonl");
  std::optional<LineWriter> soft;
  if (cfg.policy == LabelPolicy::kNaive) soft.emplace(a.out / "soft_labels.txt");

  std::size_t augmented = 0, total = 0, batches = 0;
  run_pipeline(ds, cfg, [&](Batch&& batch) {
    ++batches;
    for (std::size_t pos = 0; pos < batch.items.size(); ++pos) {
      auto& item = batch.items[pos];
      MultiLabel label;
      if (const auto* ml = std::get_if<MultiLabel>(&item.label)) {
        label = *ml;
        if (soft) {
          std::string line = item.id;
          for (int c = 1; c <= ml->num_classes(); ++c) line += ml->has(static_cast<ClassId>(c)) ? " 1" : " 0";
          soft->write(line);
        }
      } else {
        const auto& sl = std::get<SoftLabel>(item.label);
        label = MultiLabel(sl.num_classes());
        std::string line = item.id;
        for (int c = 1; c <= sl.num_classes(); ++c) {
          const double w = sl.weight(static_cast<ClassId>(c));
          if (w > 0.0) label.set(static_cast<ClassId>(c));
          line += ' ' + fmt_double(w);
        }
        soft->write(line);
      }
      writer.add(item.id, item.image, label, item.map ? &*item.map : nullptr,
                 item.masks ? &*item.masks : nullptr);
      ++total;
      if (!item.provenance) continue;
      ++augmented;
      const auto& p = *item.provenance;
      provenance.write(json{{"id", item.id},
                            {"batch", batch.index},
                            {"position", pos},
                            {"first", p.first_id},
                            {"second", p.second_id},
                            {"box1", box_json(p.box1)},
                            {"box2", box_json(p.box2)},
                            {"empty_label", p.empty_label}}
                           .dump());
    }
  });
  writer.finish();
  json effective = to_json(cfg);
  effective.erase("workers");
  LineWriter(a.out / "config.json").write(effective.dump(2));
  std::cout << augmented << " augmented, " << total - augmented << " passed through, " << batches
            << " batches\n";
  return 0;
}

// simulate-noise

struct NoiseArgs {
  fs::path manifest;
  fs::path out;
  std::vector<std::string> kinds;
  std::vector<double> fractions{0.25, 0.5, 1.0};
  std::vector<int> magnitudes;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string format = "table";
  bool write_maps = true;
};

std::vector<NoiseKind> expand_kinds(const std::vector<std::string>& names) {
  std::vector<NoiseKind> out;
  for (const auto& n : names) {
    if (n == "all") {
      for (int k = 0; k <= static_cast<int>(NoiseKind::kClassSwap); ++k) out.push_back(static_cast<NoiseKind>(k));
    } else {
      out.push_back(parse_noise_kind(n));
    }
  }
  return out;
}

json per_class_iou(const std::vector<MapRecord>& clean, const std::vector<MapRecord>& noisy) {
  std::map<int, std::pair<double, int>> acc;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    for (const auto& [cls, iou] : map_iou(clean[i].map, noisy[i].map).per_class) {
      acc[cls].first += iou;
      acc[cls].second += 1;
    }
  }
  json out = json::object();
  for (const auto& [cls, sum] : acc) out[std::to_string(cls)] = sum.first / sum.second;
  return out;
}

int cmd_simulate_noise(const NoiseArgs& a) {
  const Dataset ds = Dataset::load(a.manifest);
  print_warnings(ds);
  const auto records = ds.map_records();
  if (records.size() != ds.size()) throw DatasetError("simulate-noise needs a reference map for every sample");

  fs::create_directories(a.out);
  LineWriter manifest_out(a.out / "noise_manifest.jsonl");
  LineWriter report_out(a.out / "iou_report.jsonl");
  if (a.format == "table") {
    std::printf("%-20s %8s %9s %9s %8s\n", "kind", "fraction", "magnitude", "corrupted", "mean_iou");
  }
  for (const NoiseKind kind : expand_kinds(a.kinds)) {
    std::vector<int> mags = a.magnitudes;
    if (default_magnitude(kind) == 0) {
      mags = {0};
    } else if (mags.empty()) {
      mags = {default_magnitude(kind)};
    }
    for (const double f : a.fractions) {
      for (const int mag : mags) {
        const NoiseSpec spec{kind, f, mag};
        spec.validate();
        const auto res = apply_noise_suite(records, spec, a.seed, a.workers);
        const std::string run = std::string(to_string(kind)) + "_f" + fmt_double(f) + "_m" + std::to_string(mag);
        for (const auto& e : res.manifest) {
          json line = to_json(e);
          line["run"] = run;
          manifest_out.write(line.dump());
        }
        const double mean = mean_dataset_iou(records, res.records);
        const json report = {{"run", run},
                             {"kind", to_string(kind)},
                             {"fraction", f},
                             {"magnitude", mag},
                             {"corrupted", res.manifest.size()},
                             {"mean_iou", mean},
                             {"per_class_iou", per_class_iou(records, res.records)}};
        report_out.write(report.dump());
        if (a.format == "table") {
          std::printf("%-20s %8s %9d %9zu %8.4f\n", to_string(kind), fmt_double(f).c_str(), mag,
                      res.manifest.size(), mean);
        } else {
          std::cout << report.dump() << '\n';
        }
        if (!a.write_maps) continue;
        const auto& m = ds.manifest();
        DatasetWriter writer(a.out / run, m.num_classes, m.geometry, m.class_names);
        for (std::size_t i = 0; i < res.records.size(); ++i) {
          writer.add_with_image_path(res.records[i].id, m.samples[i].image, res.records[i].label,
                                     &res.records[i].map);
        }
        writer.finish();
      }
    }
  }
  return 0;
}

// audit

struct AuditArgs {
  fs::path manifest;
  fs::path out;
  std::vector<std::string> ranges{"0.1-0.3", "0.1-0.5", "0.1-0.7", "0.3-0.5", "0.3-0.7"};
  std::int64_t trials = 10000;
  std::uint64_t seed = 0;
  std::string format = "table";
};

int cmd_audit(const AuditArgs& a) {
  const Dataset ds = Dataset::load(a.manifest);
  print_warnings(ds);
  const auto records = ds.map_records();
  if (records.empty()) {
    throw DatasetError(
        "dataset has no reference maps, which the audit uses as ground truth; augment mask-only data "
        "with --policy lp_xai, or audit a synthetic dataset from 'make-fixture'");
  }
  std::optional<LineWriter> out;
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    out.emplace(a.out / "audit.jsonl");
  }
  bool header = true;
  for (const auto& text : a.ranges) {
    const auto report = audit_label_noise(records, {parse_box_range(text), a.seed, a.trials});
    for (const auto& line : to_json(report)) {
      if (out) out->write(line.dump());
      if (a.format == "records") std::cout << line.dump() << '\n';
    }
    if (a.format == "table") {
      std::string table = format_table(report);
      if (!header) table.erase(0, table.find('\n') + 1);
      std::cout << table;
      header = false;
    }
  }
  return 0;
}

// gen-boxes

struct BoxArgs {
  std::string range = "0.3-0.7";
  std::int64_t n = 10;
  int height = 120;
  int width = 120;
  std::uint64_t seed = 0;
  bool histogram = false;
  std::string format = "table";
};

int cmd_gen_boxes(const BoxArgs& a) {
  const auto range = parse_box_range(a.range);
  if (a.n < 1) throw ConfigError("-n must be positive");
  RngStream rng(a.seed, Purpose::kGenBoxes);
  const auto boxes = gen_boxes(range, static_cast<std::size_t>(a.n), a.height, a.width, rng);
  const bool table = a.format == "table";
  if (a.histogram) {
    std::map<std::tuple<int, int, int, int>, std::int64_t> counts;
    for (const auto& b : boxes) ++counts[{b.row0, b.col0, b.row1, b.col1}];
    if (table) std::printf("%5s %5s %5s %5s %8s\n", "row0", "col0", "row1", "col1", "count");
    for (const auto& [k, c] : counts) {
      const auto [r0, c0, r1, c1] = k;
      if (table) {
        std::printf("%5d %5d %5d %5d %8lld\n", r0, c0, r1, c1, static_cast<long long>(c));
      } else {
        std::cout << json{{"box", {r0, c0, r1, c1}}, {"count", c}}.dump() << '\n';
      }
    }
    return 0;
  }
  if (table) std::printf("%5s %5s %5s %5s %8s\n", "row0", "col0", "row1", "col1", "area");
  for (const auto& b : boxes) {
    const double area = normalized_area(b, a.height, a.width);
    if (table) {
      std::printf("%5d %5d %5d %5d %8.4f\n", b.row0, b.col0, b.row1, b.col1, area);
    } else {
      std::cout << json{{"box", box_json(b)}, {"area", area}}.dump() << '\n';
    }
  }
  return 0;
}

// validate

int cmd_validate(const fs::path& manifest, double t_cam, bool strict, const std::string& format) {
  const Dataset ds = Dataset::load(manifest, LoadOptions{t_cam});
  const auto& m = ds.manifest();
  if (format == "records") {
    std::cout << json{{"samples", ds.size()},
                      {"num_classes", m.num_classes},
                      {"maps", ds.has_maps()},
                      {"masks", ds.has_masks()},
                      {"warnings", ds.warnings()}}
                     .dump()
              << '\n';
  } else {
    print_warnings(ds);
    std::cout << ds.size() << " samples, " << m.num_classes << " classes, " << m.geometry.channels << "x"
              << m.geometry.height << "x" << m.geometry.width << ", maps " << (ds.has_maps() ? "yes" : "no")
              << ", masks " << (ds.has_masks() ? "yes" : "no") << ", " << ds.warnings().size()
              << " warnings\n";
  }
  return strict && !ds.warnings().empty() ? 1 : 0;
}

// make-fixture

struct FixtureArgs {
  std::string kind = "voronoi";
  FixtureOptions options;
  double corner_area = 0.3;
  bool no_masks = false;
  fs::path out;
};

int cmd_make_fixture(const FixtureArgs& a) {
  std::vector<Sample> samples;
  int classes = a.options.num_classes;
  const auto& o = a.options;
  if (a.kind == "voronoi") {
    FixtureOptions opts = o;
    opts.with_masks = !a.no_masks;
    samples = make_voronoi_samples(opts);
  } else if (a.kind == "corner") {
    samples = make_corner_samples(o.count, o.height, o.width, a.corner_area, o.seed);
    classes = 2;
  } else if (a.kind == "uniform") {
    samples = make_uniform_samples(o.count, o.height, o.width, o.num_classes, o.seed);
  } else {
    throw ConfigError("unknown fixture kind '" + a.kind + "'");
  }
  const Geometry geometry{samples.front().image.channels(), o.height, o.width, DType::kU8};
  DatasetWriter writer(a.out, classes, geometry);
  for (const auto& s : samples) writer.add(s);
  writer.finish();
  std::cout << "wrote " << samples.size() << " samples to " << a.out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CutMix with label propagation for multi-label rasters"};
  app.require_subcommand(1);
  const std::vector<std::string> formats{"table", "records"};

  AugmentArgs aug;
  std::string policy, box_range, partner_mode;
  double p = 0, t_cam = 0;
  std::int64_t t_map = 0;
  bool smooth = false;
  std::uint64_t aug_seed = 0, epoch = 0;
  int batch_size = 0, workers = 0;
  auto* augment = app.add_subcommand("augment", "Augment a dataset and write the result");
  augment->add_option("manifest", aug.manifest, "Dataset manifest")->required()->check(CLI::ExistingFile);
  augment->add_option("--config", aug.config, "JSON pipeline config; flags override it")->check(CLI::ExistingFile);
  augment->add_option("--out", aug.out, "Output directory")->required();
  auto* o_policy = augment->add_option("--policy", policy, "naive, lp_map or lp_xai");
  auto* o_range = augment->add_option("--box-range", box_range, "Box area range, e.g. 0.3-0.7");
  auto* o_p = augment->add_option("-p,--p", p, "Replacement probability");
  auto* o_tcam = augment->add_option("--t-cam", t_cam, "Heatmap threshold");
  auto* o_tmap = augment->add_option("--t-map", t_map, "Minimum mask pixel count (strict)");
  auto* o_smooth = augment->add_flag("--smooth-map-readout", smooth, "Apply t_map to map read-out");
  auto* o_seed = augment->add_option("--seed", aug_seed, "Seed");
  auto* o_batch = augment->add_option("--batch-size", batch_size, "Batch size");
  auto* o_partner = augment->add_option("--partner-mode", partner_mode, "batch or dataset");
  auto* o_workers = augment->add_option("--workers", workers, "Worker threads (default CUTMIXLP_THREADS or 1)");
  auto* o_epoch = augment->add_option("--epoch", epoch, "Epoch index");

  NoiseArgs noise;
  auto* sim = app.add_subcommand("simulate-noise", "Corrupt reference maps and report IoU");
  sim->add_option("manifest", noise.manifest, "Dataset manifest")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", noise.out, "Output directory")->required();
  sim->add_option("--kind", noise.kinds, "Noise kind(s) or 'all'")->required();
  sim->add_option("--fraction", noise.fractions, "Fraction(s) of maps to corrupt");
  sim->add_option("--magnitude", noise.magnitudes, "Magnitude(s); default per kind");
  sim->add_option("--seed", noise.seed, "Seed");
  sim->add_option("--workers", noise.workers, "Worker threads");
  sim->add_option("--format", noise.format, "Stdout format")->check(CLI::IsMember(formats));
  sim->add_flag("!--no-maps", noise.write_maps, "Skip writing corrupted datasets");

  AuditArgs audit;
  auto* aud = app.add_subcommand("audit", "Label-noise rates of naive CutMix against LP labels");
  aud->add_option("manifest", audit.manifest, "Dataset manifest")->required()->check(CLI::ExistingFile);
  aud->add_option("--out", audit.out, "Directory for audit.jsonl");
  aud->add_option("--box-range", audit.ranges, "Box area range(s)");
  aud->add_option("--trials", audit.trials, "Trials per range");
  aud->add_option("--seed", audit.seed, "Seed");
  aud->add_option("--format", audit.format, "Stdout format")->check(CLI::IsMember(formats));

  BoxArgs boxes;
  auto* gen = app.add_subcommand("gen-boxes", "Print boxes from the box generator");
  gen->add_option("--box-range", boxes.range, "Box area range");
  gen->add_option("-n", boxes.n, "Number of boxes");
  gen->add_option("--height", boxes.height, "Image height");
  gen->add_option("--width", boxes.width, "Image width");
  gen->add_option("--seed", boxes.seed, "Seed");
  gen->add_flag("--histogram", boxes.histogram, "Count boxes instead of listing them");
  gen->add_option("--format", boxes.format, "Stdout format")->check(CLI::IsMember(formats));

  fs::path validate_manifest;
  double validate_tcam = 0.1;
  bool strict = false;
  std::string validate_format = "table";
  auto* val = app.add_subcommand("validate", "Load and check a dataset");
  val->add_option("manifest", validate_manifest, "Dataset manifest")->required()->check(CLI::ExistingFile);
  val->add_option("--t-cam", validate_tcam, "Heatmap threshold");
  val->add_flag("--strict", strict, "Fail on warnings");
  val->add_option("--format", validate_format, "Stdout format")->check(CLI::IsMember(formats));

  FixtureArgs fixture;
  auto* fix = app.add_subcommand("make-fixture", "Write a synthetic dataset");
  fix->add_option("--kind", fixture.kind, "voronoi, corner or uniform")
      ->check(CLI::IsMember({"voronoi", "corner", "uniform"}));
  fix->add_option("--count", fixture.options.count, "Samples");
  fix->add_option("--classes", fixture.options.num_classes, "Classes (corner: always 2)");
  fix->add_option("--height", fixture.options.height, "Height");
  fix->add_option("--width", fixture.options.width, "Width");
  fix->add_option("--channels", fixture.options.channels, "Channels (voronoi)");
  fix->add_option("--seed", fixture.options.seed, "Seed");
  fix->add_option("--corner-area", fixture.corner_area, "Corner class area (corner)");
  fix->add_flag("--no-masks", fixture.no_masks, "Omit mask stacks (voronoi)");
  fix->add_option("--out", fixture.out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*augment) {
      auto& ov = aug.overrides;
      if (*o_policy) ov["policy"] = policy;
      if (*o_range) ov["box_range"] = box_range;
      if (*o_p) ov["p"] = p;
      if (*o_tcam) ov["t_cam"] = t_cam;
      if (*o_tmap) ov["t_map"] = t_map;
      if (*o_smooth) ov["smooth_map_readout"] = smooth;
      if (*o_seed) ov["seed"] = aug_seed;
      if (*o_batch) ov["batch_size"] = batch_size;
      if (*o_partner) ov["partner_mode"] = partner_mode;
      if (*o_workers) ov["workers"] = workers;
      if (*o_epoch) ov["epoch"] = epoch;
      return cmd_augment(aug);
    }
    if (*sim) return cmd_simulate_noise(noise);
    if (*aud) return cmd_audit(audit);
    if (*gen) return cmd_gen_boxes(boxes);
    if (*val) return cmd_validate(validate_manifest, validate_tcam, strict, validate_format);
    if (*fix) return cmd_make_fixture(fixture);
  } catch (const std::exception& e) {
    std::cerr << "cutmixlp: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
