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

#include "slotaug/mini_dataset.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "slotaug/errors.hpp"

namespace slotaug {
namespace {

// Incrementally maintained count of (slot, candidate) pairs inside a growing
// selection. Slots are grouped so that only pairs that can pass the category
// filter are compared, and each group is kept sorted by aspect ratio so a
// slot only scans donors inside its aspect-ratio band.
class CapacityCounter {
 public:
  CapacityCounter(const SlotDatabase& db, const FilterConfig& cfg,
                  std::span<const CategoryRecord> categories)
      : db_(db), cfg_(cfg), table_(categories) {
    std::unordered_map<std::string, int> super_ids;
    for (const auto& c : categories) super_ids.emplace(c.supercategory, super_ids.size());
    for (const auto& c : categories) {
      switch (cfg.category_mode) {
        case CategoryMode::kSameCategory:
          group_of_category_[c.id] = c.id;
          break;
        case CategoryMode::kSameSupercategory:
          group_of_category_[c.id] = super_ids.at(c.supercategory);
          break;
        case CategoryMode::kAny:
          group_of_category_[c.id] = 0;
          break;
      }
    }
  }

  /// Adds the slots at `positions` (indices into db.slots()) to the
  /// selection and returns the running pair count.
  std::uint64_t add(std::span<const std::size_t> positions) {
    std::unordered_map<std::int64_t, std::vector<std::size_t>> fresh;
    for (std::size_t p : positions) fresh[group(db_.slots()[p])].push_back(p);
    for (auto& [key, added] : fresh) {
      sort_by_ratio(added);
      auto& existing = groups_[key];
      // New slots against everything now selected in the group.
      for (std::size_t s : added) {
        total_ += count_donors(db_.slots()[s], existing);
        total_ += count_donors(db_.slots()[s], added);
      }
      // Previously selected slots against the new donors.
      for (std::size_t c : added) total_ += count_hosts(db_.slots()[c], existing);
      const auto mid = existing.insert(existing.end(), added.begin(), added.end());
      std::inplace_merge(existing.begin(), mid, existing.end(), ratio_less());
    }
    return total_;
  }

 private:
  std::int64_t group(const SlotRecord& s) const {
    auto it = group_of_category_.find(s.category_id);
    if (it == group_of_category_.end()) {
      throw IntegrityError("unknown category id " + std::to_string(s.category_id));
    }
    return it->second;
  }

  struct RatioLess {
    const SlotDatabase* db;
    bool operator()(std::size_t a, std::size_t b) const {
      const auto& sa = db->slots()[a];
      const auto& sb = db->slots()[b];
      if (sa.aspect_ratio != sb.aspect_ratio) return sa.aspect_ratio < sb.aspect_ratio;
      return a < b;
    }
  };

  RatioLess ratio_less() const { return RatioLess{&db_}; }

  void sort_by_ratio(std::vector<std::size_t>& v) const {
    std::sort(v.begin(), v.end(), ratio_less());
  }

  // [first, last) of `sorted` whose aspect ratio lies in [lo, hi].
  std::pair<std::size_t, std::size_t> ratio_window(const std::vector<std::size_t>& sorted,
                                                   double lo, double hi) const {
    const auto& slots = db_.slots();
    auto first = std::partition_point(sorted.begin(), sorted.end(),
                                      [&](std::size_t i) { return slots[i].aspect_ratio < lo; });
    auto last = std::partition_point(first, sorted.end(),
                                     [&](std::size_t i) { return slots[i].aspect_ratio <= hi; });
    return {static_cast<std::size_t>(first - sorted.begin()),
            static_cast<std::size_t>(last - sorted.begin())};
  }

  std::uint64_t count_donors(const SlotRecord& slot, const std::vector<std::size_t>& donors) const {
    std::size_t first = 0;
    std::size_t last = donors.size();
    if (cfg_.ratio_filter) {
      std::tie(first, last) =
          ratio_window(donors, slot.aspect_ratio * (1.0 - cfg_.ratio_tolerance),
                       slot.aspect_ratio * (1.0 + cfg_.ratio_tolerance));
    }
    std::uint64_t n = 0;
    for (std::size_t i = first; i < last; ++i) {
      n += passes_filters(slot, db_.slots()[donors[i]], cfg_, table_) ? 1 : 0;
    }
    return n;
  }

  std::uint64_t count_hosts(const SlotRecord& donor, const std::vector<std::size_t>& hosts) const {
    std::size_t first = 0;
    std::size_t last = hosts.size();
    if (cfg_.ratio_filter) {
      // Hosts h accept the donor when h.ar * (1 - t) <= d.ar <= h.ar * (1 + t).
      // The window is widened slightly; passes_filters decides exactly.
      constexpr double kSlack = 1e-9;
      std::tie(first, last) =
          ratio_window(hosts, donor.aspect_ratio / (1.0 + cfg_.ratio_tolerance) * (1.0 - kSlack),
                       donor.aspect_ratio / (1.0 - cfg_.ratio_tolerance) * (1.0 + kSlack));
    }
    std::uint64_t n = 0;
    for (std::size_t i = first; i < last; ++i) {
      n += passes_filters(db_.slots()[hosts[i]], donor, cfg_, table_) ? 1 : 0;
    }
    return n;
  }

  const SlotDatabase& db_;
  FilterConfig cfg_;
  CategoryTable table_;
  std::unordered_map<CategoryId, std::int64_t> group_of_category_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> groups_;
  std::uint64_t total_ = 0;
};

double population_std(const std::unordered_map<CategoryId, std::size_t>& counts,
                      std::span<const CategoryRecord> categories) {
  if (categories.empty()) return 0.0;
  const double k = static_cast<double>(categories.size());
  double mean = 0.0;
  for (const auto& c : categories) {
    auto it = counts.find(c.id);
    mean += it == counts.end() ? 0.0 : static_cast<double>(it->second);
  }
  mean /= k;
  double ss = 0.0;
  for (const auto& c : categories) {
    auto it = counts.find(c.id);
    const double d = (it == counts.end() ? 0.0 : static_cast<double>(it->second)) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / k);
}

}  // namespace

std::vector<CategoryId> categories_by_rarity(const Dataset& dataset) {
  std::unordered_map<CategoryId, std::size_t> counts;
  for (const auto& inst : dataset.instances) ++counts[inst.category_id];
  std::vector<std::pair<std::size_t, CategoryId>> keyed;
  for (const auto& c : dataset.categories) keyed.emplace_back(counts[c.id], c.id);
  std::sort(keyed.begin(), keyed.end());
  std::vector<CategoryId> order;
  for (const auto& [count, id] : keyed) order.push_back(id);
  return order;
}

MiniDatasetResult build_mini_dataset(const Dataset& source, const SlotDatabase& db,
                                     const FilterConfig& cfg) {
  cfg.validate();
  const DatasetIndex index(source);

  std::unordered_map<CategoryId, std::vector<ImageId>> images_of_category;
  for (ImageId image : index.image_ids()) {
    std::unordered_set<CategoryId> seen;
    for (std::size_t pos : index.instances_of(image)) {
      const CategoryId c = source.instances[pos].category_id;
      if (seen.insert(c).second) images_of_category[c].push_back(image);
    }
  }

  MiniDatasetResult result;
  result.category_order = categories_by_rarity(source);

  std::unordered_set<ImageId> selected;
  std::unordered_map<CategoryId, std::size_t> instance_counts;
  std::size_t images = 0;
  std::size_t instances = 0;
  std::size_t slots = 0;
  std::uint64_t capacity = 0;
  CapacityCounter counter(db, cfg, source.categories);

  for (std::size_t step = 0; step < result.category_order.size(); ++step) {
    const CategoryId category = result.category_order[step];
    std::vector<ImageId> increment;
    std::vector<std::size_t> new_slots;
    for (ImageId image : images_of_category[category]) {
      if (!selected.insert(image).second) continue;
      increment.push_back(image);
      for (std::size_t pos : index.instances_of(image)) {
        ++instance_counts[source.instances[pos].category_id];
        ++instances;
      }
      const auto image_slots = db.of_image(image);
      new_slots.insert(new_slots.end(), image_slots.begin(), image_slots.end());
    }
    images += increment.size();
    slots += new_slots.size();
    capacity = counter.add(new_slots);

    StepRecord r;
    r.step_index = step;
    r.category_added = category;
    r.cumulative_images = images;
    r.cumulative_instances = instances;
    r.slot_amount = slots;
    r.avg_slots_per_image = images == 0 ? 0.0 : static_cast<double>(slots) / images;
    r.instance_std = population_std(instance_counts, source.categories);
    r.all_categories_included = std::all_of(
        source.categories.begin(), source.categories.end(),
        [&](const CategoryRecord& c) { return instance_counts[c.id] > 0; });
    r.capacity = capacity;
    result.records.push_back(r);
    result.increments.push_back(std::move(increment));
  }
  return result;
}

Dataset select_step(const MiniDatasetResult& result, const Dataset& source, std::size_t step) {
  if (step >= result.increments.size()) {
    throw ArgumentError("step " + std::to_string(step) + " out of range (have " +
                        std::to_string(result.increments.size()) + " steps)");
  }
  std::unordered_set<ImageId> keep;
  for (std::size_t s = 0; s <= step; ++s) {
    keep.insert(result.increments[s].begin(), result.increments[s].end());
  }
  Dataset out;
  out.info = source.info;
  out.licenses = source.licenses;
  out.categories = source.categories;
  for (const auto& img : source.images) {
    if (keep.contains(img.id)) out.images.push_back(img);
  }
  for (const auto& inst : source.instances) {
    if (keep.contains(inst.image_id)) out.instances.push_back(inst);
  }
  return out;
}

std::string records_to_csv(std::span<const StepRecord> records) {
  std::string out =
      "step_index,category_added,cumulative_images,cumulative_instances,slot_amount,"
      "avg_slots_per_image,instance_std,all_categories_included,capacity\n";
  char line[256];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%zu,%" PRId64 ",%zu,%zu,%zu,%.6f,%.6f,%s,%" PRIu64 "\n",
                  r.step_index, r.category_added, r.cumulative_images, r.cumulative_instances,
                  r.slot_amount, r.avg_slots_per_image, r.instance_std,
                  r.all_categories_included ? "true" : "false", r.capacity);
    out += line;
  }
  return out;
}

}  // namespace slotaug
