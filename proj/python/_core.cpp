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

// Python bindings. Inputs are copied into library rasters before the GIL is
// released, so callers may mutate their arrays afterwards.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "cutmixlp/boxgen.hpp"
#include "cutmixlp/error.hpp"
#include "cutmixlp/pipeline.hpp"
#include "cutmixlp/tensor_io.hpp"
#include "cutmixlp/xai.hpp"

namespace py = pybind11;
using namespace cutmixlp;

namespace {

template <class T>
using CArray = py::array_t<T, py::array::c_style | py::array::forcecast>;

void require_ndim(const py::array& a, int ndim, const char* what) {
  if (a.ndim() != ndim) {
    throw ContractError(std::string(what) + " must have " + std::to_string(ndim) + " dimensions, got " +
                        std::to_string(a.ndim()));
  }
}

int dim(const py::array& a, int i) { return static_cast<int>(a.shape(i)); }

template <class T>
std::vector<T> slice(const CArray<T>& a, py::ssize_t index) {
  const auto n = static_cast<std::size_t>(a.size() / a.shape(0));
  const T* begin = a.data() + static_cast<std::size_t>(index) * n;
  return std::vector<T>(begin, begin + n);
}

template <class T>
py::array_t<T> stack(const std::vector<const Raster<T>*>& rasters, bool drop_planes) {
  const auto& first = *rasters.front();
  std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(rasters.size())};
  if (!drop_planes) shape.push_back(first.planes());
  shape.push_back(first.height());
  shape.push_back(first.width());
  py::array_t<T> out(shape);
  T* dst = out.mutable_data();
  for (const auto* r : rasters) {
    std::memcpy(dst, r->data().data(), r->data().size_bytes());
    dst += r->data().size();
  }
  return out;
}

PipelineConfig config_from(const py::dict& config) {
  PipelineConfig cfg;
  const std::string text = py::module_::import("json").attr("dumps")(config).cast<std::string>();
  apply_json(cfg, nlohmann::json::parse(text));
  cfg.validate();
  return cfg;
}

py::dict augment_batch_py(const py::array& images, const CArray<std::uint8_t>& labels,
                          const std::optional<CArray<ClassId>>& maps,
                          const std::optional<CArray<std::uint8_t>>& masks, const py::dict& config,
                          std::uint64_t batch_index, const std::optional<std::vector<std::string>>& ids,
                          std::optional<int> num_classes) {
  const PipelineConfig cfg = config_from(config);
  require_ndim(images, 4, "images");
  require_ndim(labels, 2, "labels");
  const int n = dim(images, 0), channels = dim(images, 1), h = dim(images, 2), w = dim(images, 3);
  const int L = dim(labels, 1);
  if (num_classes && *num_classes != L) {
    throw ContractError("labels have length " + std::to_string(L) + ", expected L = " +
                        std::to_string(*num_classes));
  }
  if (dim(labels, 0) != n) throw ContractError("labels must have one row per image");
  if (ids && static_cast<int>(ids->size()) != n) throw ContractError("ids must have one entry per image");
  if (maps) {
    require_ndim(*maps, 3, "maps");
    if (dim(*maps, 0) != n || dim(*maps, 1) != h || dim(*maps, 2) != w) {
      throw ContractError("maps must have shape (B, H, W) matching images");
    }
  }
  if (masks) {
    require_ndim(*masks, 4, "masks");
    if (dim(*masks, 0) != n || dim(*masks, 2) != h || dim(*masks, 3) != w) {
      throw ContractError("masks must have shape (B, L, H, W) matching images");
    }
    if (dim(*masks, 1) != L) {
      throw ContractError("masks have " + std::to_string(dim(*masks, 1)) + " planes, expected L = " +
                          std::to_string(L));
    }
  }
  const bool is_u8 = py::isinstance<py::array_t<std::uint8_t>>(images);
  if (!is_u8 && !py::isinstance<py::array_t<float>>(images)) {
    throw ContractError("images must be uint8 or float32");
  }

  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(n));
  const auto u8_images = is_u8 ? CArray<std::uint8_t>::ensure(images) : CArray<std::uint8_t>();
  const auto f32_images = is_u8 ? CArray<float>() : CArray<float>::ensure(images);
  for (int i = 0; i < n; ++i) {
    Sample s;
    if (ids) {
      s.id = (*ids)[static_cast<std::size_t>(i)];
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%05d", i);
      s.id = buf;
    }
    s.image = is_u8 ? ImageRaster(Raster<std::uint8_t>(channels, h, w, slice(u8_images, i)))
                    : ImageRaster(Raster<float>(channels, h, w, slice(f32_images, i)));
    s.label = MultiLabel(L);
    for (int c = 0; c < L; ++c) {
      if (labels.at(i, c) != 0) s.label.set(static_cast<ClassId>(c + 1));
    }
    if (maps) {
      s.map = RefMap(h, w, slice(*maps, i));
      for (ClassId v : s.map->data()) {
        if (v > L) {
          throw ContractError("map of sample " + s.id + " holds class " + std::to_string(v) +
                              ", expected ids in 0..L = " + std::to_string(L));
        }
      }
    }
    if (masks) s.masks = MaskStack(L, h, w, slice(*masks, i));
    samples.push_back(std::move(s));
  }

  Batch batch;
  {
    py::gil_scoped_release release;
    batch = augment_batch(samples, cfg, batch_index);
  }

  py::dict out;
  std::vector<const Raster<std::uint8_t>*> u8s;
  std::vector<const Raster<float>*> f32s;
  for (const auto& item : batch.items) {
    if (is_u8) {
      u8s.push_back(&item.image.as<std::uint8_t>());
    } else {
      f32s.push_back(&item.image.as<float>());
    }
  }
  out["images"] = is_u8 ? py::array(stack(u8s, false)) : py::array(stack(f32s, false));

  const bool soft = cfg.policy == LabelPolicy::kNaive;
  py::array_t<double> soft_labels({n, L});
  py::array_t<std::uint8_t> hard_labels({n, L});
  py::list provenance;
  py::array_t<bool> replaced(n);
  for (int i = 0; i < n; ++i) {
    const auto& item = batch.items[static_cast<std::size_t>(i)];
    for (int c = 0; c < L; ++c) {
      const auto cls = static_cast<ClassId>(c + 1);
      if (const auto* ml = std::get_if<MultiLabel>(&item.label)) {
        soft_labels.mutable_at(i, c) = ml->has(cls) ? 1.0 : 0.0;
        hard_labels.mutable_at(i, c) = ml->has(cls) ? 1 : 0;
      } else {
        soft_labels.mutable_at(i, c) = std::get<SoftLabel>(item.label).weight(cls);
      }
    }
    replaced.mutable_at(i) = item.provenance.has_value();
    if (!item.provenance) {
      provenance.append(py::none());
      continue;
    }
    const auto& p = *item.provenance;
    auto box = [](const Box& b) { return py::make_tuple(b.row0, b.col0, b.row1, b.col1); };
    provenance.append(py::dict(py::arg("first") = p.first_id, py::arg("second") = p.second_id,
                               py::arg("box1") = box(p.box1), py::arg("box2") = box(p.box2),
                               py::arg("empty_label") = p.empty_label));
  }
  out["labels"] = soft ? py::array(soft_labels) : py::array(hard_labels);
  out["replaced"] = replaced;
  out["provenance"] = provenance;

  out["maps"] = py::none();
  out["masks"] = py::none();
  if (maps) {
    std::vector<const Raster<ClassId>*> rs;
    for (const auto& item : batch.items) rs.push_back(&item.map.value());
    out["maps"] = stack(rs, true);
  }
  if (masks) {
    std::vector<const Raster<std::uint8_t>*> rs;
    for (const auto& item : batch.items) rs.push_back(&item.masks.value());
    out["masks"] = stack(rs, false);
  }
  return out;
}

py::array_t<std::uint8_t> threshold_heatmaps_py(const CArray<float>& heatmap, const CArray<std::uint8_t>& label,
                                                double t_cam) {
  require_ndim(heatmap, 3, "heatmap");
  require_ndim(label, 1, "label");
  const int L = dim(heatmap, 0), h = dim(heatmap, 1), w = dim(heatmap, 2);
  if (dim(label, 0) != L) {
    throw ContractError("label has length " + std::to_string(dim(label, 0)) + ", expected L = " +
                        std::to_string(L));
  }
  Heatmap hm(L, h, w, std::vector<float>(heatmap.data(), heatmap.data() + heatmap.size()));
  MultiLabel ml(L);
  for (int c = 0; c < L; ++c) {
    if (label.at(c) != 0) ml.set(static_cast<ClassId>(c + 1));
  }
  MaskStack masks;
  {
    py::gil_scoped_release release;
    masks = threshold_heatmaps(hm, ml, t_cam);
  }
  return stack(std::vector<const Raster<std::uint8_t>*>{&masks}, false).squeeze();
}

py::array_t<std::int32_t> gen_boxes_py(const std::string& box_range, std::size_t n, int height, int width,
                                       std::uint64_t seed) {
  const auto range = parse_box_range(box_range);
  std::vector<Box> boxes;
  {
    py::gil_scoped_release release;
    RngStream rng(seed, Purpose::kGenBoxes);
    boxes = gen_boxes(range, n, height, width, rng);
  }
  py::array_t<std::int32_t> out({static_cast<py::ssize_t>(n), py::ssize_t{4}});
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = boxes[i];
    const auto r = static_cast<py::ssize_t>(i);
    out.mutable_at(r, 0) = b.row0;
    out.mutable_at(r, 1) = b.col0;
    out.mutable_at(r, 2) = b.row1;
    out.mutable_at(r, 3) = b.col1;
  }
  return out;
}

py::array read_rten(const std::string& path) {
  const RawTensor t = read_tensor_file(path);
  std::vector<py::ssize_t> shape(t.dims.begin(), t.dims.end());
  py::array out = t.dtype == DType::kU8 ? py::array(py::array_t<std::uint8_t>(shape))
                                        : py::array(py::array_t<float>(shape));
  std::memcpy(out.mutable_data(), t.payload.data(), t.payload.size());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "CutMix with label propagation for multi-label rasters";

  py::register_exception<Error>(m, "CutmixError", PyExc_ValueError);

  m.def("augment_batch", &augment_batch_py, py::arg("images"), py::arg("labels"), py::arg("maps") = py::none(),
        py::arg("masks") = py::none(), py::arg("config") = py::dict(), py::arg("batch_index") = 0,
        py::arg("ids") = py::none(), py::arg("num_classes") = py::none(),
        "Augment one batch. images (B, C, H, W) uint8 or float32, labels (B, L) multi-hot, maps (B, H, W), "
        "masks (B, L, H, W); config keys mirror the pipeline config file.");
  m.def("threshold_heatmaps", &threshold_heatmaps_py, py::arg("heatmap"), py::arg("label"),
        py::arg("t_cam") = kDefaultTCam, "Binary masks (L, H, W) from heatmaps; absent classes are zeroed.");
  m.def("gen_boxes", &gen_boxes_py, py::arg("box_range"), py::arg("n"), py::arg("height"), py::arg("width"),
        py::arg("seed") = 0, "Boxes as rows (row0, col0, row1, col1), half-open.");
  m.def("read_rten", &read_rten, py::arg("path"), "Load an RTEN tensor file.");
}
