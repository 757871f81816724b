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

#include "slotaug/slot_db.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "slotaug/coco_io.hpp"
#include "slotaug/errors.hpp"
#include "slotaug/geometry.hpp"
#include "slotaug/parallel.hpp"

namespace slotaug {

SlotRecord SlotRecord::from_instance(const Instance& instance) {
  SlotRecord r;
  r.instance_id = instance.id;
  r.image_id = instance.image_id;
  r.category_id = instance.category_id;
  r.bbox = instance.bbox;
  r.width = instance.bbox.width();
  r.height = instance.bbox.height();
  r.area = r.width * r.height;
  r.aspect_ratio = r.width / r.height;
  return r;
}

SlotDatabase::SlotDatabase(std::vector<SlotRecord> slots) : slots_(std::move(slots)) {
  std::sort(slots_.begin(), slots_.end(), [](const SlotRecord& a, const SlotRecord& b) {
    return a.image_id != b.image_id ? a.image_id < b.image_id : a.instance_id < b.instance_id;
  });
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const SlotRecord& s = slots_[i];
    const std::string tag = "slot " + std::to_string(s.instance_id);
    if (!by_instance_.emplace(s.instance_id, i).second) throw IntegrityError("duplicate " + tag);
    if (!s.bbox.valid()) throw IntegrityError(tag + " has an empty bbox");
    if (s.width != s.bbox.width() || s.height != s.bbox.height() ||
        s.area != s.width * s.height || s.aspect_ratio != s.width / s.height) {
      throw IntegrityError(tag + " attributes disagree with its bbox");
    }
    by_category_[s.category_id].push_back(i);
    by_image_[s.image_id].push_back(i);
  }
}

std::span<const std::size_t> SlotDatabase::of_category(CategoryId id) const {
  auto it = by_category_.find(id);
  if (it == by_category_.end()) return {};
  return it->second;
}

std::span<const std::size_t> SlotDatabase::of_image(ImageId id) const {
  auto it = by_image_.find(id);
  if (it == by_image_.end()) return {};
  return it->second;
}

const SlotRecord* SlotDatabase::find(InstanceId instance_id) const {
  auto it = by_instance_.find(instance_id);
  return it == by_instance_.end() ? nullptr : &slots_[it->second];
}

SlotDatabase build_slot_database(const Dataset& dataset, int jobs) {
  const DatasetIndex index(dataset);
  const auto& image_ids = index.image_ids();
  std::vector<std::vector<SlotRecord>> per_image(image_ids.size());
  parallel_for(image_ids.size(), jobs, [&](std::size_t i) {
    std::vector<Instance> instances;
    for (std::size_t pos : index.instances_of(image_ids[i])) {
      instances.push_back(dataset.instances[pos]);
    }
    if (instances.empty()) return;
    for (const Instance& inst : find_isolated(instances)) {
      per_image[i].push_back(SlotRecord::from_instance(inst));
    }
  });
  std::vector<SlotRecord> all;
  for (auto& v : per_image) all.insert(all.end(), v.begin(), v.end());
  return SlotDatabase(std::move(all));
}

std::vector<SlotRecord> query(const SlotDatabase& db, const SlotQuery& q,
                              std::span<const CategoryRecord> categories) {
  for (const auto& range : {q.area, q.aspect_ratio}) {
    if (range && range->min > range->max) {
      throw ArgumentError("query range is inverted (min > max)");
    }
  }
  std::unordered_map<CategoryId, const std::string*> supercategory;
  if (q.supercategory) {
    for (const auto& c : categories) supercategory.emplace(c.id, &c.supercategory);
  }
  const std::unordered_set<CategoryId> wanted(q.category_ids.begin(), q.category_ids.end());
  const std::unordered_set<ImageId> excluded(q.exclude_image_ids.begin(),
                                             q.exclude_image_ids.end());

  std::vector<SlotRecord> out;
  for (const SlotRecord& s : db.slots()) {
    if (!wanted.empty() && !wanted.contains(s.category_id)) continue;
    if (excluded.contains(s.image_id)) continue;
    if (q.area && !q.area->contains(s.area)) continue;
    if (q.aspect_ratio && !q.aspect_ratio->contains(s.aspect_ratio)) continue;
    if (q.supercategory) {
      auto it = supercategory.find(s.category_id);
      if (it == supercategory.end()) {
        throw IntegrityError("slot " + std::to_string(s.instance_id) + " has unknown category " +
                             std::to_string(s.category_id));
      }
      if (*it->second != *q.supercategory) continue;
    }
    out.push_back(s);
  }
  return out;
}

nlohmann::ordered_json slot_database_to_json(const SlotDatabase& db) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SlotRecord& s : db.slots()) {
    nlohmann::ordered_json o;
    o["instance_id"] = s.instance_id;
    o["image_id"] = s.image_id;
    o["category_id"] = s.category_id;
    o["bbox"] = {s.bbox.x1(), s.bbox.y1(), s.bbox.width(), s.bbox.height()};
    o["width"] = s.width;
    o["height"] = s.height;
    o["area"] = s.area;
    o["aspect_ratio"] = s.aspect_ratio;
    arr.push_back(std::move(o));
  }
  return arr;
}

SlotDatabase slot_database_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("slot database must be a JSON array", 0);
  std::vector<SlotRecord> slots;
  slots.reserve(doc.size());
  try {
    for (const auto& o : doc) {
      SlotRecord s;
      s.instance_id = o.at("instance_id").get<InstanceId>();
      s.image_id = o.at("image_id").get<ImageId>();
      s.category_id = o.at("category_id").get<CategoryId>();
      const auto& b = o.at("bbox");
      if (!b.is_array() || b.size() != 4) throw ParseError("slot bbox must have 4 numbers", 0);
      s.bbox = BBox::from_xywh(b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                               b[3].get<double>());
      s.width = o.at("width").get<double>();
      s.height = o.at("height").get<double>();
      s.area = o.at("area").get<double>();
      s.aspect_ratio = o.at("aspect_ratio").get<double>();
      slots.push_back(s);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("slot database: ") + e.what(), 0);
  }
  return SlotDatabase(std::move(slots));
}

void write_slot_database(const SlotDatabase& db, const std::filesystem::path& path) {
  write_file(path, slot_database_to_json(db).dump(1) + "\n");
}

SlotDatabase read_slot_database(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  return slot_database_from_json(doc);
}

}  // namespace slotaug
