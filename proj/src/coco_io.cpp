// Copyright 2026 The slotaug Authors.
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

#include "slotaug/coco_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "slotaug/errors.hpp"

namespace slotaug {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Schema violations inside well-formed JSON carry offset 0.
[[noreturn]] void schema_error(const std::string& what) {
  throw ParseError("COCO schema: " + what, 0);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where + " is missing '" + key + "'");
  return *it;
}

std::int64_t as_id(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d) return static_cast<std::int64_t>(d);
  }
  schema_error(where + " must be an integer");
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where + " must be a number");
  return v.get<double>();
}

std::string as_string(const json& obj, const char* key, const std::string& where,
                      bool required = true) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) schema_error(where + " is missing '" + key + "'");
    return {};
  }
  if (!it->is_string()) schema_error(where + "." + key + " must be a string");
  return it->get<std::string>();
}

const json& require_array(const json& doc, const char* key) {
  const json& arr = require(doc, key, "document");
  if (!arr.is_array()) schema_error(std::string("'") + key + "' must be an array");
  return arr;
}

ordered_json number(double v) {
  if (std::isfinite(v) && std::floor(v) == v && std::fabs(v) < 9007199254740992.0) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

}  // namespace

Dataset parse_dataset(std::string_view annotation_json, const ParseOptions& options) {
  json doc;
  try {
    doc = json::parse(annotation_json.begin(), annotation_json.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!doc.is_object()) schema_error("top level must be an object");

  Dataset ds;
  for (const json& img : require_array(doc, "images")) {
    if (!img.is_object()) schema_error("image entries must be objects");
    ImageRecord rec;
    rec.id = as_id(require(img, "id", "image"), "image.id");
    const std::string where = "image " + std::to_string(rec.id);
    rec.file_name = as_string(img, "file_name", where);
    rec.width = static_cast<int>(as_id(require(img, "width", where), where + ".width"));
    rec.height = static_cast<int>(as_id(require(img, "height", where), where + ".height"));
    ds.images.push_back(std::move(rec));
  }
  for (const json& cat : require_array(doc, "categories")) {
    if (!cat.is_object()) schema_error("category entries must be objects");
    CategoryRecord rec;
    rec.id = as_id(require(cat, "id", "category"), "category.id");
    const std::string where = "category " + std::to_string(rec.id);
    rec.name = as_string(cat, "name", where);
    rec.supercategory = as_string(cat, "supercategory", where, /*required=*/false);
    ds.categories.push_back(std::move(rec));
  }

  std::unordered_map<ImageId, const ImageRecord*> images;
  for (const auto& img : ds.images) images.emplace(img.id, &img);

  for (const json& ann : require_array(doc, "annotations")) {
    if (!ann.is_object()) schema_error("annotation entries must be objects");
    Instance inst;
    inst.id = as_id(require(ann, "id", "annotation"), "annotation.id");
    const std::string where = "annotation " + std::to_string(inst.id);
    inst.image_id = as_id(require(ann, "image_id", where), where + ".image_id");
    inst.category_id = as_id(require(ann, "category_id", where), where + ".category_id");
    const json& box = require(ann, "bbox", where);
    if (!box.is_array() || box.size() != 4) schema_error(where + ".bbox must be [x, y, w, h]");
    inst.bbox = BBox::from_xywh(as_number(box[0], where), as_number(box[1], where),
                                as_number(box[2], where), as_number(box[3], where));
    if (auto it = ann.find("area"); it != ann.end()) {
      inst.area = as_number(*it, where + ".area");
    } else {
      inst.area = inst.bbox.area();
    }
    if (auto it = ann.find("iscrowd"); it != ann.end()) {
      inst.is_crowd = it->is_boolean() ? it->get<bool>() : as_id(*it, where + ".iscrowd") != 0;
    }

    auto image = images.find(inst.image_id);
    if (image == images.end()) {
      throw IntegrityError(where + " references missing image " + std::to_string(inst.image_id));
    }

    std::string problem;
    if (!inst.bbox.valid()) {
      problem = "non-positive bbox width/height";
    } else if (!inst.bbox.inside(image->second->width, image->second->height)) {
      problem = "bbox outside image bounds";
    } else if (!(inst.area > 0.0)) {
      problem = "non-positive area";
    }
    if (!problem.empty()) {
      if (options.bad_boxes == BadBoxPolicy::kFail) throw IntegrityError(where + ": " + problem);
      if (options.on_warning) options.on_warning("skipping " + where + ": " + problem);
      continue;
    }
    ds.instances.push_back(inst);
  }

  if (auto it = doc.find("info"); it != doc.end()) ds.info = *it;
  if (auto it = doc.find("licenses"); it != doc.end()) ds.licenses = *it;

  validate(ds);
  return ds;
}

Dataset read_dataset(const std::filesystem::path& path, const ParseOptions& options) {
  return parse_dataset(read_file(path), options);
}

std::string serialize_dataset(const Dataset& dataset) {
  ordered_json doc = ordered_json::object();
  if (dataset.info) doc["info"] = ordered_json::parse(dataset.info->dump());
  if (dataset.licenses) doc["licenses"] = ordered_json::parse(dataset.licenses->dump());

  ordered_json images = ordered_json::array();
  for (const auto& img : dataset.images) {
    ordered_json o;
    o["id"] = img.id;
    o["file_name"] = img.file_name;
    o["width"] = img.width;
    o["height"] = img.height;
    images.push_back(std::move(o));
  }
  ordered_json annotations = ordered_json::array();
  for (const auto& inst : dataset.instances) {
    ordered_json o;
    o["id"] = inst.id;
    o["image_id"] = inst.image_id;
    o["category_id"] = inst.category_id;
    o["bbox"] = {number(inst.bbox.x1()), number(inst.bbox.y1()), number(inst.bbox.width()),
                 number(inst.bbox.height())};
    o["area"] = number(inst.area);
    o["iscrowd"] = inst.is_crowd ? 1 : 0;
    annotations.push_back(std::move(o));
  }
  ordered_json categories = ordered_json::array();
  for (const auto& cat : dataset.categories) {
    ordered_json o;
    o["id"] = cat.id;
    o["name"] = cat.name;
    o["supercategory"] = cat.supercategory;
    categories.push_back(std::move(o));
  }
  doc["images"] = std::move(images);
  doc["annotations"] = std::move(annotations);
  doc["categories"] = std::move(categories);
  return doc.dump() + "\n";
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  write_file(path, serialize_dataset(dataset));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string(), path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string(), path.string());
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string(), path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string(), path.string());
}

RasterImage load_image(const ImageRecord& record, const std::filesystem::path& root) {
  const auto path = root / record.file_name;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw IoError("image file not found: " + path.string(), path.string());
  }
  cv::Mat mat = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (mat.empty()) throw IoError("cannot decode image: " + path.string(), path.string());
  if (mat.cols != record.width || mat.rows != record.height) {
    throw DimensionError("image " + std::to_string(record.id) + " is " +
                             std::to_string(mat.cols) + "x" + std::to_string(mat.rows) +
                             " but annotated as " + std::to_string(record.width) + "x" +
                             std::to_string(record.height),
                         record.id);
  }
  RasterImage out(mat.cols, mat.rows, mat.channels());
  for (int y = 0; y < mat.rows; ++y) {
    auto dst = out.row(y);
    std::memcpy(dst.data(), mat.ptr<std::uint8_t>(y), dst.size());
  }
  return out;
}

void save_png(const RasterImage& image, const std::filesystem::path& path) {
  if (image.empty()) throw IoError("refusing to write an empty image", path.string());
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const int type = CV_MAKETYPE(CV_8U, image.channels());
  // cv::Mat header over our buffer; imwrite only reads it.
  cv::Mat mat(image.height(), image.width(), type,
              const_cast<std::uint8_t*>(image.data().data()));
  const std::vector<int> params = {cv::IMWRITE_PNG_COMPRESSION, 3};
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat, params);
  } catch (const cv::Exception& e) {
    throw IoError(std::string("cannot encode PNG: ") + e.what(), path.string());
  }
  if (!ok) throw IoError("cannot write " + path.string(), path.string());
}

}  // namespace slotaug
