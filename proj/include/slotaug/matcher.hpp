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
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "slotaug/dataset.hpp"
#include "slotaug/slot_db.hpp"

namespace slotaug {

enum class CategoryMode { kSameCategory, kSameSupercategory, kAny };

std::string_view to_string(CategoryMode mode);
/// Accepts "same_category", "same_supercategory", "any".
CategoryMode parse_category_mode(std::string_view text);

struct FilterConfig {
  double ratio_tolerance = 0.20;
  double scale_tolerance = 0.20;
  CategoryMode category_mode = CategoryMode::kSameCategory;
  bool exclude_same_image = true;
  // Ablation switches; both filters are on in normal operation.
  bool ratio_filter = true;
  bool scale_filter = true;
  std::uint64_t seed = 0;

  /// Throws ArgumentError unless both tolerances lie in (0, 1).
  void validate() const;

  friend bool operator==(const FilterConfig&, const FilterConfig&) = default;
};

/// Inclusive multiplicative band [reference * (1 - t), reference * (1 + t)].
constexpr bool within_band(double value, double reference, double tolerance) {
  return value >= reference * (1.0 - tolerance) && value <= reference * (1.0 + tolerance);
}

/// Category id -> supercategory lookup used by the category filter.
class CategoryTable {
 public:
  explicit CategoryTable(std::span<const CategoryRecord> categories);

  bool contains(CategoryId id) const { return supercategory_.contains(id); }
  /// Throws IntegrityError for an unknown id.
  const std::string& supercategory(CategoryId id) const;

 private:
  std::unordered_map<CategoryId, std::string> supercategory_;
};

/// The three filters applied to one (slot, candidate) pair: aspect ratio,
/// then scale (bbox area), then category. Also rejects the slot itself and,
/// when configured, donors from the slot's own image.
bool passes_filters(const SlotRecord& slot, const SlotRecord& candidate, const FilterConfig& cfg,
                    const CategoryTable& categories);

/// All candidates in `db` that pass the filters for `slot`, in database
/// order. Throws IntegrityError when a category id is unknown.
std::vector<SlotRecord> filter_candidates(const SlotRecord& slot, const SlotDatabase& db,
                                          const FilterConfig& cfg,
                                          std::span<const CategoryRecord> categories);

/// splitmix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Selection hash: splitmix64(seed XOR instance_id), the id taken as its
/// two's-complement 64-bit pattern.
constexpr std::uint64_t selection_hash(std::uint64_t seed, InstanceId instance_id) {
  return splitmix64(seed ^ static_cast<std::uint64_t>(instance_id));
}

/// filtered[selection_hash(seed, slot.instance_id) % filtered.size()], or
/// nullopt when no candidate survived the filters.
std::optional<SlotRecord> select_candidate(const SlotRecord& slot,
                                           std::span<const SlotRecord> filtered,
                                           std::uint64_t seed);

struct Assignment {
  SlotRecord slot;
  SlotRecord candidate;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct SkippedSlot {
  InstanceId slot_id = 0;
  std::string reason;

  friend bool operator==(const SkippedSlot&, const SkippedSlot&) = default;
};

inline constexpr std::string_view kSkipNoCandidates = "no_candidates";

/// One epoch of substitutions: every targeted slot is filled at most once.
struct AugmentationPlan {
  std::vector<Assignment> assignments;
  std::vector<SkippedSlot> skipped;
  FilterConfig config;
  std::size_t targeted_slots = 0;
  int epoch = 1;

  friend bool operator==(const AugmentationPlan&, const AugmentationPlan&) = default;
};

/// Filters and selects a candidate for every slot matching `target`, in
/// database order. Slots without candidates are recorded in `skipped`.
AugmentationPlan build_plan(const SlotDatabase& db, const SlotQuery& target,
                            const FilterConfig& cfg, std::span<const CategoryRecord> categories,
                            int jobs = 1);

/// Re-checks plan invariants: no slot appears twice and every assignment
/// passes the filters under plan.config. Throws IntegrityError.
void validate_plan(const AugmentationPlan& plan, std::span<const CategoryRecord> categories);

nlohmann::ordered_json plan_to_json(const AugmentationPlan& plan);
/// Resolves instance ids against `db`. Throws IntegrityError for ids that
/// are not slots and ParseError for schema mismatches.
AugmentationPlan plan_from_json(const nlohmann::json& doc, const SlotDatabase& db);

nlohmann::ordered_json filter_config_to_json(const FilterConfig& cfg);
FilterConfig filter_config_from_json(const nlohmann::json& doc);

}  // namespace slotaug
