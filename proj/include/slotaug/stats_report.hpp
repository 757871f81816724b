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
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "slotaug/compositor.hpp"
#include "slotaug/dataset.hpp"
#include "slotaug/matcher.hpp"
#include "slotaug/slot_db.hpp"

namespace slotaug {

struct CategoryStats {
  CategoryId category_id = 0;
  std::string name;
  std::size_t image_count = 0;
  std::size_t instance_count = 0;
  std::size_t slot_count = 0;

  friend bool operator==(const CategoryStats&, const CategoryStats&) = default;
};

/// Per-category tallies, sorted by instance_count descending then id.
std::vector<CategoryStats> category_stats(const Dataset& dataset, const SlotDatabase& db);

/// 100 * original / (original + augmented). A run with nothing augmented
/// reports 0 by table convention. Throws ArgumentError when original is 0
/// but augmented is not.
double proportion_of_original(std::uint64_t original, std::uint64_t augmented);

/// proportion_of_original as text with two decimals, rounded half-up in
/// exact integer arithmetic ("78.97").
std::string format_proportion(std::uint64_t original, std::uint64_t augmented);

struct AugmentationSummary {
  std::string method_label;
  std::uint64_t original_images = 0;
  std::uint64_t augmented_images = 0;
  double original_proportion = 0.0;

  static AugmentationSummary make(std::string label, std::uint64_t original,
                                  std::uint64_t augmented);
};

/// Two augmentation streams over the same originals (e.g. flipping plus slot
/// substitution): augmented counts add up.
AugmentationSummary combine(const AugmentationSummary& a, const AugmentationSummary& b,
                            std::string label);

struct SkipDiagnostics {
  std::size_t no_candidates = 0;
  std::size_t degenerate = 0;
  std::size_t io_failure = 0;

  std::size_t total() const { return no_candidates + degenerate + io_failure; }
  friend bool operator==(const SkipDiagnostics&, const SkipDiagnostics&) = default;
};

struct RunReport {
  AugmentationSummary summary;
  SkipDiagnostics skips;
  std::size_t planned_assignments = 0;
  std::size_t targeted_slots = 0;
};

/// Summarises an executed plan. `original_images` is the number of source
/// images the augmentation targets (e.g. images containing a car).
RunReport run_report(const AugmentationPlan& plan, const ExecutionResult& execution,
                     std::uint64_t original_images, std::string method_label);

/// Number of images holding at least one instance of the given categories;
/// all images when `category_ids` is empty.
std::uint64_t count_images_with(const Dataset& dataset, std::span<const CategoryId> category_ids);

nlohmann::ordered_json run_report_to_json(const RunReport& report);
std::string summary_table(std::span<const AugmentationSummary> rows);

std::string category_stats_csv(std::span<const CategoryStats> stats);
nlohmann::ordered_json category_stats_json(std::span<const CategoryStats> stats);
/// Aligned plain-text table for terminals.
std::string category_stats_table(std::span<const CategoryStats> stats);

}  // namespace slotaug
