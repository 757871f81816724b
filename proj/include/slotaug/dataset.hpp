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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "slotaug/bbox.hpp"

namespace slotaug {

using ImageId = std::int64_t;
using InstanceId = std::int64_t;
using CategoryId = std::int64_t;

struct ImageRecord {
  ImageId id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct Instance {
  InstanceId id = 0;
  ImageId image_id = 0;
  CategoryId category_id = 0;
  BBox bbox;
  bool is_crowd = false;
  double area = 0.0;

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct CategoryRecord {
  CategoryId id = 0;
  std::string name;
  std::string supercategory;

  friend bool operator==(const CategoryRecord&, const CategoryRecord&) = default;
};

/// In-memory COCO dataset. Treated as immutable once parsed.
struct Dataset {
  std::vector<ImageRecord> images;
  std::vector<Instance> instances;
  std::vector<CategoryRecord> categories;
  // Opaque pass-through of the COCO `info` and `licenses` blocks.
  std::optional<nlohmann::json> info;
  std::optional<nlohmann::json> licenses;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Id -> position lookups over a Dataset. Holds a reference; the dataset
/// must outlive the index.
class DatasetIndex {
 public:
  explicit DatasetIndex(const Dataset& dataset);

  const Dataset& dataset() const { return *dataset_; }

  const ImageRecord* image(ImageId id) const;
  const CategoryRecord* category(CategoryId id) const;
  const CategoryRecord* category_by_name(const std::string& name) const;

  /// Positions into dataset().instances for one image, in file order.
  const std::vector<std::size_t>& instances_of(ImageId id) const;

  /// Image ids in file order.
  const std::vector<ImageId>& image_ids() const { return image_order_; }

 private:
  const Dataset* dataset_;
  std::unordered_map<ImageId, std::size_t> images_;
  std::unordered_map<CategoryId, std::size_t> categories_;
  std::unordered_map<std::string, std::size_t> category_names_;
  std::unordered_map<ImageId, std::vector<std::size_t>> by_image_;
  std::vector<ImageId> image_order_;
};

/// Checks every invariant of the dataset model: unique ids and category
/// names, positive image sizes, resolvable references, valid in-bounds
/// boxes with positive area. Throws IntegrityError on the first violation.
void validate(const Dataset& dataset);

}  // namespace slotaug
