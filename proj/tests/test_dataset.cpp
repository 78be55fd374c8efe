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

#include <filesystem>
#include <fstream>

#include "cutmixlp/dataset.hpp"
#include "cutmixlp/synthetic.hpp"
#include "cutmixlp/tensor_io.hpp"
#include "cutmixlp/xai.hpp"

using namespace cutmixlp;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cutmixlp_test_dataset_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string error_of(const fs::path& manifest) {
  try {
    Dataset::load(manifest);
  } catch (const DatasetError& e) {
    return e.what();
  }
  return "";
}

void write_text(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

void write_small_image(const fs::path& path) {
  write_tensor_file(path, to_tensor(ImageRaster(Raster<std::uint8_t>(3, 4, 4, 9))));
}

const char* kHeader = R"({"num_classes": 4, "geometry": {"channels": 3, "height": 4, "width": 4}, "labels": "labels.txt", )";

}  // namespace

TEST_CASE("writer output loads back identically") {
  const auto dir = fresh_dir("roundtrip");
  FixtureOptions o;
  o.count = 6;
  o.height = 16;
  o.width = 12;
  const auto samples = make_voronoi_samples(o);
  DatasetWriter writer(dir, o.num_classes, {3, 16, 12, DType::kU8});
  for (const auto& s : samples) writer.add(s);
  writer.finish();

  const auto ds = Dataset::load(dir / "manifest.json");
  REQUIRE(ds.size() == samples.size());
  CHECK(ds.warnings().empty());
  CHECK(ds.has_maps());
  CHECK(ds.has_masks());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto s = ds.get(i);
    CHECK(s.id == samples[i].id);
    CHECK(s.image == samples[i].image);
    CHECK(s.label == samples[i].label);
    CHECK(s.map == samples[i].map);
    CHECK(s.masks == samples[i].masks);
  }
  CHECK(ds.map_records() == to_map_records(samples));
}

TEST_CASE("repeated reads are byte-identical") {
  const auto dir = fresh_dir("single");
  fs::create_directories(dir / "images");
  write_small_image(dir / "images" / "a.rten");
  write_text(dir / "labels.txt", "# comment\n\na 1 3\n");
  write_text(dir / "manifest.json", std::string(kHeader) + R"("samples": [{"id": "a", "image": "images/a.rten"}]})");
  const auto ds = Dataset::load(dir / "manifest.json");
  REQUIRE(ds.size() == 1);
  const auto first = ds.get(0);
  const auto second = ds.get(0);
  CHECK(encode_tensor(to_tensor(first.image)) == encode_tensor(to_tensor(second.image)));
  CHECK(first.label == MultiLabel(4, {1, 3}));
  CHECK(first.label == second.label);
  CHECK_FALSE(ds.has_maps());
}

TEST_CASE("empty dataset") {
  const auto dir = fresh_dir("empty");
  write_text(dir / "labels.txt", "");
  write_text(dir / "manifest.json", std::string(kHeader) + R"("samples": []})");
  CHECK(error_of(dir / "manifest.json").find("no samples") != std::string::npos);
}

TEST_CASE("map class above L names the sample") {
  const auto dir = fresh_dir("class5");
  fs::create_directories(dir / "images");
  write_small_image(dir / "images" / "tile7.rten");
  RefMap map(4, 4, ClassId{1});
  map.at(2, 2) = 5;
  write_tensor_file(dir / "m.rten", to_tensor(map));
  write_text(dir / "labels.txt", "tile7 1\n");
  write_text(dir / "manifest.json", std::string(kHeader) +
                                        R"("samples": [{"id": "tile7", "image": "images/tile7.rten", "map": "m.rten"}]})");
  const auto err = error_of(dir / "manifest.json");
  CHECK(err.find("tile7") != std::string::npos);
  CHECK(err.find("class 5") != std::string::npos);
}

TEST_CASE("geometry mismatch names the sample") {
  const auto dir = fresh_dir("geometry");
  write_tensor_file(dir / "b.rten", to_tensor(ImageRaster(Raster<std::uint8_t>(3, 5, 4))));
  write_text(dir / "labels.txt", "b 2\n");
  write_text(dir / "manifest.json", std::string(kHeader) + R"("samples": [{"id": "b", "image": "b.rten"}]})");
  const auto err = error_of(dir / "manifest.json");
  CHECK(err.find("'b'") != std::string::npos);
  CHECK(err.find("geometry") != std::string::npos);
}

TEST_CASE("inconsistent pairs become warnings") {
  const auto dir = fresh_dir("warn");
  write_small_image(dir / "c.rten");
  RefMap map(4, 4, ClassId{1});
  map.at(0, 0) = 2;
  write_tensor_file(dir / "c_map.rten", to_tensor(map));
  write_text(dir / "labels.txt", "c 1 4\n");
  write_text(dir / "manifest.json",
             std::string(kHeader) + R"("samples": [{"id": "c", "image": "c.rten", "map": "c_map.rten"}]})");
  const auto ds = Dataset::load(dir / "manifest.json");
  REQUIRE(ds.warnings().size() == 2);
  CHECK(ds.warnings()[0] == "c: class 2 unlabeled at image level");
  CHECK(ds.warnings()[1] == "c: class 4 has no pixels");
}

TEST_CASE("parse errors carry file and line") {
  const auto dir = fresh_dir("parse");
  write_text(dir / "manifest.json", "{\n  \"num_classes\": 4,\n  oops\n}\n");
  const auto err = error_of(dir / "manifest.json");
  CHECK(err.find("manifest.json:3:") != std::string::npos);

  write_text(dir / "labels.txt", "a 1\nb 2 x\n");
  try {
    read_label_file(dir / "labels.txt", 4);
    FAIL("accepted a bad label");
  } catch (const DatasetError& e) {
    CHECK(std::string(e.what()).find("labels.txt:2:") != std::string::npos);
  }
  write_text(dir / "labels.txt", "a 3 1\n");
  CHECK_THROWS_AS(read_label_file(dir / "labels.txt", 4), DatasetError);
  write_text(dir / "labels.txt", "a 9\n");
  CHECK_THROWS_AS(read_label_file(dir / "labels.txt", 4), DatasetError);
}

TEST_CASE("heatmaps are thresholded at load time") {
  const auto dir = fresh_dir("heat");
  write_small_image(dir / "h.rten");
  std::vector<float> heat(2 * 16, 0.05F);
  heat[0] = 0.5F;        // class 1 present
  heat[16 + 1] = 0.9F;   // class 2 absent from the label
  write_tensor_file(dir / "h_heat.rten", to_tensor(Heatmap(2, 4, 4, heat)));
  write_text(dir / "labels.txt", "h 1\n");
  write_text(dir / "manifest.json",
             R"({"num_classes": 2, "geometry": {"channels": 3, "height": 4, "width": 4}, "labels": "labels.txt",)"
             R"( "samples": [{"id": "h", "image": "h.rten", "heatmap": "h_heat.rten"}]})");
  const auto s = Dataset::load(dir / "manifest.json").get(0);
  REQUIRE(s.masks.has_value());
  CHECK(mask_stats(*s.masks) == std::vector<std::int64_t>{1, 0});
}

TEST_CASE("sample ids must be file-name safe") {
  CHECK_THROWS_AS(check_sample_id("../x"), DatasetError);
  CHECK_THROWS_AS(check_sample_id(""), DatasetError);
  CHECK_NOTHROW(check_sample_id("S2A_tile-01.b"));
}
