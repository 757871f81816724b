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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "slotaug/dataset.hpp"

namespace slotaug {

/// An isolated, non-crowd instance together with its scale attributes. The
/// same record serves as a slot (host) and as a candidate (donor).
struct SlotRecord {
  InstanceId instance_id = 0;
  ImageId image_id = 0;
  CategoryId category_id = 0;
  BBox bbox;
  double width = 0.0;
  double height = 0.0;
  double area = 0.0;
  double aspect_ratio = 0.0;

  static SlotRecord from_instance(const Instance& instance);

  friend bool operator==(const SlotRecord&, const SlotRecord&) = default;
};

/// Immutable slot table ordered by (image_id, instance_id), with
/// per-category and per-image indices.
class SlotDatabase {
 public:
  SlotDatabase() = default;

  /// Sorts the records by (image_id, instance_id). Throws IntegrityError on
  /// duplicate instance ids or inconsistent derived attributes.
  explicit SlotDatabase(std::vector<SlotRecord> slots);

  std::span<const SlotRecord> slots() const { return slots_; }
  std::size_t size() const { return slots_.size(); }
  bool empty() const { return slots_.empty(); }

  /// Positions into slots() for a category / an image; empty if none.
  std::span<const std::size_t> of_category(CategoryId id) const;
  std::span<const std::size_t> of_image(ImageId id) const;

  const SlotRecord* find(InstanceId instance_id) const;

  friend bool operator==(const SlotDatabase& a, const SlotDatabase& b) {
    return a.slots_ == b.slots_;
  }

 private:
  std::vector<SlotRecord> slots_;
  std::unordered_map<CategoryId, std::vector<std::size_t>> by_category_;
  std::unordered_map<ImageId, std::vector<std::size_t>> by_image_;
  std::unordered_map<InstanceId, std::size_t> by_instance_;
};

/// Runs isolation per image and promotes every isolated instance to a slot.
/// `jobs` bounds worker threads; the result does not depend on it.
SlotDatabase build_slot_database(const Dataset& dataset, int jobs = 1);

/// Closed interval [min, max].
struct Range {
  double min = 0.0;
  double max = 0.0;
  bool contains(double v) const { return v >= min && v <= max; }
};

/// Conjunction of attribute constraints; unset members do not constrain.
struct SlotQuery {
  std::vector<CategoryId> category_ids;  // any of these
  std::optional<std::string> supercategory;
  std::optional<Range> area;
  std::optional<Range> aspect_ratio;
  std::vector<ImageId> exclude_image_ids;
};

/// All slots satisfying every constraint, in database order. Throws
/// ArgumentError for inverted ranges and IntegrityError when a supercategory
/// constraint meets a slot whose category is unknown.
std::vector<SlotRecord> query(const SlotDatabase& db, const SlotQuery& q,
                              std::span<const CategoryRecord> categories = {});

nlohmann::ordered_json slot_database_to_json(const SlotDatabase& db);
SlotDatabase slot_database_from_json(const nlohmann::json& doc);

void write_slot_database(const SlotDatabase& db, const std::filesystem::path& path);
SlotDatabase read_slot_database(const std::filesystem::path& path);

}  // namespace slotaug
