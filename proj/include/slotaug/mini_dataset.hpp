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
#include <span>
#include <string>
#include <vector>

#include "slotaug/dataset.hpp"
#include "slotaug/matcher.hpp"
#include "slotaug/slot_db.hpp"

namespace slotaug {

/// Metrics of the cumulative selection after one greedy step.
struct StepRecord {
  std::size_t step_index = 0;
  CategoryId category_added = 0;
  std::size_t cumulative_images = 0;
  std::size_t cumulative_instances = 0;
  std::size_t slot_amount = 0;
  double avg_slots_per_image = 0.0;
  /// Population standard deviation of per-category instance counts over all
  /// dataset categories (absent ones count as zero).
  double instance_std = 0.0;
  bool all_categories_included = false;
  /// (slot, candidate) pairs inside the selection passing the filters.
  std::uint64_t capacity = 0;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct MiniDatasetResult {
  std::vector<StepRecord> records;
  /// Image ids moved into the selection at each step, in dataset order.
  std::vector<std::vector<ImageId>> increments;
  /// Categories in processing order (ascending instance count, then id).
  std::vector<CategoryId> category_order;
  std::optional<std::size_t> chosen_step;
};

/// Categories sorted by total instance count ascending, ties by id.
std::vector<CategoryId> categories_by_rarity(const Dataset& dataset);

/// Greedy accumulation: for each category from rarest to most common, move
/// every still-unselected image holding one of its instances into the
/// selection and record the metrics of the cumulative selection. `cfg`
/// defines the filters used for the capacity metric.
MiniDatasetResult build_mini_dataset(const Dataset& source, const SlotDatabase& db,
                                     const FilterConfig& cfg);

/// The cumulative selection through `step` as a standalone dataset with
/// source ids and all source categories. Throws ArgumentError when `step`
/// is out of range.
Dataset select_step(const MiniDatasetResult& result, const Dataset& source, std::size_t step);

/// One CSV row per step, header included.
std::string records_to_csv(std::span<const StepRecord> records);

}  // namespace slotaug
