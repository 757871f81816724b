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

#include "slotaug/dataset.hpp"

#include <string>
#include <unordered_set>

#include "slotaug/errors.hpp"

namespace slotaug {

DatasetIndex::DatasetIndex(const Dataset& dataset) : dataset_(&dataset) {
  images_.reserve(dataset.images.size());
  image_order_.reserve(dataset.images.size());
  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    images_.emplace(dataset.images[i].id, i);
    image_order_.push_back(dataset.images[i].id);
  }
  for (std::size_t i = 0; i < dataset.categories.size(); ++i) {
    categories_.emplace(dataset.categories[i].id, i);
    category_names_.emplace(dataset.categories[i].name, i);
  }
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    by_image_[dataset.instances[i].image_id].push_back(i);
  }
}

const ImageRecord* DatasetIndex::image(ImageId id) const {
  auto it = images_.find(id);
  return it == images_.end() ? nullptr : &dataset_->images[it->second];
}

const CategoryRecord* DatasetIndex::category(CategoryId id) const {
  auto it = categories_.find(id);
  return it == categories_.end() ? nullptr : &dataset_->categories[it->second];
}

const CategoryRecord* DatasetIndex::category_by_name(const std::string& name) const {
  auto it = category_names_.find(name);
  return it == category_names_.end() ? nullptr : &dataset_->categories[it->second];
}

const std::vector<std::size_t>& DatasetIndex::instances_of(ImageId id) const {
  static const std::vector<std::size_t> kNone;
  auto it = by_image_.find(id);
  return it == by_image_.end() ? kNone : it->second;
}

void validate(const Dataset& dataset) {
  std::unordered_map<ImageId, const ImageRecord*> images;
  for (const auto& image : dataset.images) {
    if (image.width <= 0 || image.height <= 0) {
      throw IntegrityError("image " + std::to_string(image.id) + " has non-positive size");
    }
    if (!images.emplace(image.id, &image).second) {
      throw IntegrityError("duplicate image id " + std::to_string(image.id));
    }
  }
  std::unordered_set<CategoryId> categories;
  std::unordered_set<std::string> names;
  for (const auto& category : dataset.categories) {
    if (!categories.insert(category.id).second) {
      throw IntegrityError("duplicate category id " + std::to_string(category.id));
    }
    if (!names.insert(category.name).second) {
      throw IntegrityError("duplicate category name '" + category.name + "'");
    }
  }
  std::unordered_set<InstanceId> instances;
  for (const auto& inst : dataset.instances) {
    const std::string tag = "annotation " + std::to_string(inst.id);
    if (!instances.insert(inst.id).second) throw IntegrityError("duplicate " + tag);
    auto image = images.find(inst.image_id);
    if (image == images.end()) {
      throw IntegrityError(tag + " references missing image " + std::to_string(inst.image_id));
    }
    if (!categories.contains(inst.category_id)) {
      throw IntegrityError(tag + " references missing category " +
                           std::to_string(inst.category_id));
    }
    if (!inst.bbox.valid()) throw IntegrityError(tag + " has an empty bbox");
    if (!inst.bbox.inside(image->second->width, image->second->height)) {
      throw IntegrityError(tag + " bbox lies outside its image");
    }
    if (!(inst.area > 0.0)) throw IntegrityError(tag + " has non-positive area");
  }
}

}  // namespace slotaug
