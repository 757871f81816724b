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

#include "slotaug/stats_report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "slotaug/errors.hpp"

namespace slotaug {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Hundredths of a percent, rounded half-up exactly.
std::uint64_t proportion_hundredths(std::uint64_t original, std::uint64_t augmented) {
  __extension__ using u128 = unsigned __int128;
  const u128 total = static_cast<u128>(original) + augmented;
  return static_cast<std::uint64_t>((static_cast<u128>(original) * 20000 + total) / (2 * total));
}

std::string hundredths_to_string(std::uint64_t h) {
  std::ostringstream os;
  os << h / 100 << '.' << std::setw(2) << std::setfill('0') << h % 100;
  return os.str();
}

}  // namespace

std::vector<CategoryStats> category_stats(const Dataset& dataset, const SlotDatabase& db) {
  std::unordered_map<CategoryId, std::size_t> instances;
  std::unordered_map<CategoryId, std::unordered_set<ImageId>> images;
  for (const auto& inst : dataset.instances) {
    ++instances[inst.category_id];
    images[inst.category_id].insert(inst.image_id);
  }
  std::vector<CategoryStats> out;
  out.reserve(dataset.categories.size());
  for (const auto& c : dataset.categories) {
    CategoryStats s;
    s.category_id = c.id;
    s.name = c.name;
    s.instance_count = instances[c.id];
    s.image_count = images[c.id].size();
    s.slot_count = db.of_category(c.id).size();
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const CategoryStats& a, const CategoryStats& b) {
    if (a.instance_count != b.instance_count) return a.instance_count > b.instance_count;
    return a.category_id < b.category_id;
  });
  return out;
}

double proportion_of_original(std::uint64_t original, std::uint64_t augmented) {
  if (augmented == 0) return 0.0;
  if (original == 0) throw ArgumentError("augmented images without any original image");
  return 100.0 * static_cast<double>(original) / static_cast<double>(original + augmented);
}

std::string format_proportion(std::uint64_t original, std::uint64_t augmented) {
  if (augmented == 0) return "0.00";
  if (original == 0) throw ArgumentError("augmented images without any original image");
  return hundredths_to_string(proportion_hundredths(original, augmented));
}

AugmentationSummary AugmentationSummary::make(std::string label, std::uint64_t original,
                                              std::uint64_t augmented) {
  AugmentationSummary s;
  s.method_label = std::move(label);
  s.original_images = original;
  s.augmented_images = augmented;
  s.original_proportion = proportion_of_original(original, augmented);
  return s;
}

AugmentationSummary combine(const AugmentationSummary& a, const AugmentationSummary& b,
                            std::string label) {
  if (a.original_images != b.original_images) {
    throw ArgumentError("combined summaries must share the same original images");
  }
  return AugmentationSummary::make(std::move(label), a.original_images,
                                   a.augmented_images + b.augmented_images);
}

RunReport run_report(const AugmentationPlan& plan, const ExecutionResult& execution,
                     std::uint64_t original_images, std::string method_label) {
  RunReport r;
  r.summary = AugmentationSummary::make(std::move(method_label), original_images,
                                        execution.delta.images.size());
  r.planned_assignments = plan.assignments.size();
  r.targeted_slots = plan.targeted_slots;
  r.skips.no_candidates = plan.skipped.size();
  for (const auto& f : execution.failures) {
    switch (f.kind) {
      case FailureKind::kNoCandidates:
        ++r.skips.no_candidates;
        break;
      case FailureKind::kDegenerate:
        ++r.skips.degenerate;
        break;
      case FailureKind::kIo:
        ++r.skips.io_failure;
        break;
    }
  }
  return r;
}

std::uint64_t count_images_with(const Dataset& dataset, std::span<const CategoryId> category_ids) {
  if (category_ids.empty()) return dataset.images.size();
  const std::unordered_set<CategoryId> wanted(category_ids.begin(), category_ids.end());
  std::unordered_set<ImageId> images;
  for (const auto& inst : dataset.instances) {
    if (wanted.contains(inst.category_id)) images.insert(inst.image_id);
  }
  return images.size();
}

nlohmann::ordered_json run_report_to_json(const RunReport& report) {
  const auto& s = report.summary;
  nlohmann::ordered_json summary;
  summary["method_label"] = s.method_label;
  summary["original_images"] = s.original_images;
  summary["augmented_images"] = s.augmented_images;
  summary["original_proportion_percent"] =
      s.original_images == 0 && s.augmented_images > 0
          ? nlohmann::ordered_json(nullptr)
          : nlohmann::ordered_json(format_proportion(s.original_images, s.augmented_images));
  // With nothing augmented the table convention prints 0%; the plain ratio is
  // kept alongside so either reading is recoverable.
  if (s.augmented_images == 0) {
    summary["formula_proportion_percent"] =
        s.original_images == 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json("100.00");
  }

  nlohmann::ordered_json skips;
  skips["no_candidates"] = report.skips.no_candidates;
  skips["degenerate_rectangle"] = report.skips.degenerate;
  skips["io_failure"] = report.skips.io_failure;

  nlohmann::ordered_json doc;
  doc["summary"] = std::move(summary);
  doc["targeted_slots"] = report.targeted_slots;
  doc["planned_assignments"] = report.planned_assignments;
  doc["skipped"] = std::move(skips);
  return doc;
}

std::string summary_table(std::span<const AugmentationSummary> rows) {
  std::size_t label_width = 6;
  for (const auto& r : rows) label_width = std::max(label_width, r.method_label.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(label_width)) << "Method" << "  " << std::right
     << std::setw(10) << "Original" << "  " << std::setw(10) << "Augmented" << "  "
     << std::setw(10) << "Proportion" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(label_width)) << r.method_label << "  "
       << std::right << std::setw(10) << r.original_images << "  " << std::setw(10)
       << r.augmented_images << "  " << std::setw(9)
       << format_proportion(r.original_images, r.augmented_images) << "%\n";
  }
  return os.str();
}

std::string category_stats_csv(std::span<const CategoryStats> stats) {
  std::string out = "category_id,name,image_count,instance_count,slot_count\n";
  for (const auto& s : stats) {
    out += std::to_string(s.category_id) + "," + csv_field(s.name) + "," +
           std::to_string(s.image_count) + "," + std::to_string(s.instance_count) + "," +
           std::to_string(s.slot_count) + "\n";
  }
  return out;
}

nlohmann::ordered_json category_stats_json(std::span<const CategoryStats> stats) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : stats) {
    nlohmann::ordered_json o;
    o["category_id"] = s.category_id;
    o["name"] = s.name;
    o["image_count"] = s.image_count;
    o["instance_count"] = s.instance_count;
    o["slot_count"] = s.slot_count;
    arr.push_back(std::move(o));
  }
  return arr;
}

std::string category_stats_table(std::span<const CategoryStats> stats) {
  std::size_t name_width = 8;
  for (const auto& s : stats) name_width = std::max(name_width, s.name.size());
  std::ostringstream os;
  os << std::right << std::setw(6) << "id" << "  " << std::left
     << std::setw(static_cast<int>(name_width)) << "category" << std::right << std::setw(10)
     << "images" << std::setw(12) << "instances" << std::setw(10) << "slots" << '\n';
  std::size_t instances = 0, slots = 0;
  for (const auto& s : stats) {
    os << std::setw(6) << s.category_id << "  " << std::left
       << std::setw(static_cast<int>(name_width)) << s.name << std::right << std::setw(10)
       << s.image_count << std::setw(12) << s.instance_count << std::setw(10) << s.slot_count
       << '\n';
    instances += s.instance_count;
    slots += s.slot_count;
  }
  os << std::setw(6) << "" << "  " << std::left << std::setw(static_cast<int>(name_width))
     << "total" << std::right << std::setw(10) << "-" << std::setw(12) << instances
     << std::setw(10) << slots << '\n';
  return os.str();
}

}  // namespace slotaug
