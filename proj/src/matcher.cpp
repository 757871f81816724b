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

#include "slotaug/matcher.hpp"

#include <string>
#include <unordered_set>

#include "slotaug/errors.hpp"
#include "slotaug/parallel.hpp"

namespace slotaug {

std::string_view to_string(CategoryMode mode) {
  switch (mode) {
    case CategoryMode::kSameCategory:
      return "same_category";
    case CategoryMode::kSameSupercategory:
      return "same_supercategory";
    case CategoryMode::kAny:
      return "any";
  }
  return "?";
}

CategoryMode parse_category_mode(std::string_view text) {
  if (text == "same_category") return CategoryMode::kSameCategory;
  if (text == "same_supercategory") return CategoryMode::kSameSupercategory;
  if (text == "any") return CategoryMode::kAny;
  throw ArgumentError("unknown category mode '" + std::string(text) +
                      "' (expected same_category, same_supercategory or any)");
}

void FilterConfig::validate() const {
  auto in_unit = [](double t) { return t > 0.0 && t < 1.0; };
  if (!in_unit(ratio_tolerance) || !in_unit(scale_tolerance)) {
    throw ArgumentError("filter tolerances must lie in (0, 1)");
  }
}

CategoryTable::CategoryTable(std::span<const CategoryRecord> categories) {
  for (const auto& c : categories) supercategory_.emplace(c.id, c.supercategory);
}

const std::string& CategoryTable::supercategory(CategoryId id) const {
  auto it = supercategory_.find(id);
  if (it == supercategory_.end()) {
    throw IntegrityError("unknown category id " + std::to_string(id));
  }
  return it->second;
}

bool passes_filters(const SlotRecord& slot, const SlotRecord& candidate, const FilterConfig& cfg,
                    const CategoryTable& categories) {
  if (candidate.instance_id == slot.instance_id) return false;
  if (cfg.exclude_same_image && candidate.image_id == slot.image_id) return false;
  if (cfg.ratio_filter &&
      !within_band(candidate.aspect_ratio, slot.aspect_ratio, cfg.ratio_tolerance)) {
    return false;
  }
  if (cfg.scale_filter && !within_band(candidate.area, slot.area, cfg.scale_tolerance)) {
    return false;
  }
  switch (cfg.category_mode) {
    case CategoryMode::kSameCategory:
      return candidate.category_id == slot.category_id;
    case CategoryMode::kSameSupercategory:
      return categories.supercategory(candidate.category_id) ==
             categories.supercategory(slot.category_id);
    case CategoryMode::kAny:
      return true;
  }
  return false;
}

namespace {

std::vector<SlotRecord> filter_with(const SlotRecord& slot, const SlotDatabase& db,
                                    const FilterConfig& cfg, const CategoryTable& table) {
  // Surfaces unknown slot categories in every mode.
  (void)table.supercategory(slot.category_id);
  std::vector<SlotRecord> out;
  if (cfg.category_mode == CategoryMode::kSameCategory) {
    for (std::size_t i : db.of_category(slot.category_id)) {
      const SlotRecord& c = db.slots()[i];
      if (passes_filters(slot, c, cfg, table)) out.push_back(c);
    }
    return out;
  }
  for (const SlotRecord& c : db.slots()) {
    (void)table.supercategory(c.category_id);
    if (passes_filters(slot, c, cfg, table)) out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<SlotRecord> filter_candidates(const SlotRecord& slot, const SlotDatabase& db,
                                          const FilterConfig& cfg,
                                          std::span<const CategoryRecord> categories) {
  if (db.find(slot.instance_id) == nullptr) {
    throw ArgumentError("slot " + std::to_string(slot.instance_id) + " is not in the database");
  }
  return filter_with(slot, db, cfg, CategoryTable(categories));
}

std::optional<SlotRecord> select_candidate(const SlotRecord& slot,
                                           std::span<const SlotRecord> filtered,
                                           std::uint64_t seed) {
  if (filtered.empty()) return std::nullopt;
  const std::uint64_t k = selection_hash(seed, slot.instance_id) % filtered.size();
  return filtered[k];
}

AugmentationPlan build_plan(const SlotDatabase& db, const SlotQuery& target,
                            const FilterConfig& cfg, std::span<const CategoryRecord> categories,
                            int jobs) {
  cfg.validate();
  const CategoryTable table(categories);
  const std::vector<SlotRecord> targeted = query(db, target, categories);

  std::vector<std::optional<SlotRecord>> chosen(targeted.size());
  parallel_for(targeted.size(), jobs, [&](std::size_t i) {
    const auto filtered = filter_with(targeted[i], db, cfg, table);
    chosen[i] = select_candidate(targeted[i], filtered, cfg.seed);
  });

  AugmentationPlan plan;
  plan.config = cfg;
  plan.targeted_slots = targeted.size();
  for (std::size_t i = 0; i < targeted.size(); ++i) {
    if (chosen[i]) {
      plan.assignments.push_back({targeted[i], *chosen[i]});
    } else {
      plan.skipped.push_back({targeted[i].instance_id, std::string(kSkipNoCandidates)});
    }
  }
  return plan;
}

void validate_plan(const AugmentationPlan& plan, std::span<const CategoryRecord> categories) {
  const CategoryTable table(categories);
  std::unordered_set<InstanceId> seen;
  for (const auto& a : plan.assignments) {
    const std::string tag = "slot " + std::to_string(a.slot.instance_id);
    if (!seen.insert(a.slot.instance_id).second) throw IntegrityError(tag + " assigned twice");
    if (!passes_filters(a.slot, a.candidate, plan.config, table)) {
      throw IntegrityError(tag + ": candidate " + std::to_string(a.candidate.instance_id) +
                           " fails the filters");
    }
  }
}

nlohmann::ordered_json filter_config_to_json(const FilterConfig& cfg) {
  nlohmann::ordered_json o;
  o["ratio_tolerance"] = cfg.ratio_tolerance;
  o["scale_tolerance"] = cfg.scale_tolerance;
  o["category_mode"] = std::string(to_string(cfg.category_mode));
  o["exclude_same_image"] = cfg.exclude_same_image;
  o["ratio_filter"] = cfg.ratio_filter;
  o["scale_filter"] = cfg.scale_filter;
  o["seed"] = cfg.seed;
  return o;
}

FilterConfig filter_config_from_json(const nlohmann::json& doc) {
  FilterConfig cfg;
  try {
    cfg.ratio_tolerance = doc.at("ratio_tolerance").get<double>();
    cfg.scale_tolerance = doc.at("scale_tolerance").get<double>();
    cfg.category_mode = parse_category_mode(doc.at("category_mode").get<std::string>());
    cfg.exclude_same_image = doc.at("exclude_same_image").get<bool>();
    cfg.ratio_filter = doc.value("ratio_filter", true);
    cfg.scale_filter = doc.value("scale_filter", true);
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("filter config: ") + e.what(), 0);
  }
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json plan_to_json(const AugmentationPlan& plan) {
  nlohmann::ordered_json doc;
  doc["epoch"] = plan.epoch;
  doc["config"] = filter_config_to_json(plan.config);
  doc["targeted_slots"] = plan.targeted_slots;
  nlohmann::ordered_json assignments = nlohmann::ordered_json::array();
  for (const auto& a : plan.assignments) {
    nlohmann::ordered_json o;
    o["slot"] = a.slot.instance_id;
    o["candidate"] = a.candidate.instance_id;
    assignments.push_back(std::move(o));
  }
  nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
  for (const auto& s : plan.skipped) {
    nlohmann::ordered_json o;
    o["slot"] = s.slot_id;
    o["reason"] = s.reason;
    skipped.push_back(std::move(o));
  }
  doc["assignments"] = std::move(assignments);
  doc["skipped"] = std::move(skipped);
  return doc;
}

AugmentationPlan plan_from_json(const nlohmann::json& doc, const SlotDatabase& db) {
  AugmentationPlan plan;
  auto resolve = [&](InstanceId id) {
    const SlotRecord* s = db.find(id);
    if (s == nullptr) throw IntegrityError("plan references unknown slot " + std::to_string(id));
    return *s;
  };
  try {
    plan.epoch = doc.at("epoch").get<int>();
    plan.config = filter_config_from_json(doc.at("config"));
    plan.targeted_slots = doc.at("targeted_slots").get<std::size_t>();
    for (const auto& o : doc.at("assignments")) {
      plan.assignments.push_back({resolve(o.at("slot").get<InstanceId>()),
                                  resolve(o.at("candidate").get<InstanceId>())});
    }
    for (const auto& o : doc.at("skipped")) {
      plan.skipped.push_back({o.at("slot").get<InstanceId>(), o.at("reason").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("plan: ") + e.what(), 0);
  }
  if (plan.epoch != 1) throw IntegrityError("plan epoch must be 1");
  return plan;
}

}  // namespace slotaug
