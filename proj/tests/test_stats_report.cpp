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

#include <cstdio>
#include <numeric>
#include <random>

#include "doctest.h"
#include "slotaug/errors.hpp"
#include "slotaug/stats_report.hpp"
#include "support.hpp"

using namespace slotaug;

namespace {

Instance inst(InstanceId id, ImageId image, CategoryId cat, BBox box, bool crowd = false) {
  Instance i;
  i.id = id;
  i.image_id = image;
  i.category_id = cat;
  i.bbox = box;
  i.area = box.area();
  i.is_crowd = crowd;
  return i;
}

// Two-decimal percentage through long double; fine away from exact ties.
std::string approx_percent(std::uint64_t o, std::uint64_t a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2Lf", 100.0L * o / static_cast<long double>(o + a));
  return buf;
}

SlotRecord slot(InstanceId id, ImageId image) {
  return SlotRecord::from_instance(inst(id, image, 1, BBox::from_xywh(0, 0, 4, 4)));
}

}  // namespace

TEST_CASE("category_stats tallies images, instances and slots") {
  Dataset ds;
  ds.categories = {{1, "car", "vehicle"}, {2, "boat", "vehicle"}, {3, "kite", "sports"}};
  ds.images = {{1, "a.png", 100, 100}, {2, "b.png", 100, 100}};
  ds.instances = {inst(1, 1, 1, BBox::from_xywh(0, 0, 10, 10)),
                  inst(2, 1, 1, BBox::from_xywh(5, 5, 10, 10)),
                  inst(3, 2, 1, BBox::from_xywh(0, 0, 10, 10)),
                  inst(4, 2, 2, BBox::from_xywh(50, 50, 10, 10)),
                  inst(5, 2, 2, BBox::from_xywh(80, 80, 10, 10), true)};
  const auto stats = category_stats(ds, build_slot_database(ds));
  REQUIRE(stats.size() == 3);
  CHECK(stats[0] == CategoryStats{1, "car", 2, 3, 1});
  CHECK(stats[1] == CategoryStats{2, "boat", 1, 2, 1});
  CHECK(stats[2] == CategoryStats{3, "kite", 0, 0, 0});

  CHECK(category_stats_csv(stats) ==
        "category_id,name,image_count,instance_count,slot_count\n"
        "1,car,2,3,1\n2,boat,1,2,1\n3,kite,0,0,0\n");
  CHECK(category_stats_json(stats)[1]["slot_count"] == 1);
  CHECK(category_stats_table(stats).find("total") != std::string::npos);
}

TEST_CASE("category_stats conserves totals on random data") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    testing::SyntheticOptions opt;
    opt.seed = seed;
    opt.images = 40;
    opt.categories = 7;
    const Dataset ds = testing::synthetic_dataset(opt);
    const SlotDatabase db = build_slot_database(ds);
    const auto stats = category_stats(ds, db);
    CHECK(stats.size() == ds.categories.size());
    std::size_t instances = 0, slots = 0;
    for (const auto& s : stats) {
      instances += s.instance_count;
      slots += s.slot_count;
      CHECK(s.image_count <= s.instance_count);
    }
    CHECK(instances == ds.instances.size());
    CHECK(slots == db.slots().size());
    for (std::size_t k = 1; k < stats.size(); ++k)
      CHECK(stats[k - 1].instance_count >= stats[k].instance_count);
  }
}

TEST_CASE("proportion of original images") {
  CHECK(format_proportion(118287, 118287) == "50.00");
  CHECK(format_proportion(12251, 3262) == "78.97");
  CHECK(format_proportion(3025, 940) == "76.29");
  CHECK(format_proportion(12251, 15513) == "44.13");
  CHECK(format_proportion(4139, 6363) == "39.41");
  CHECK(proportion_of_original(3, 1) == doctest::Approx(75.0));

  // Nothing augmented: the table convention.
  CHECK(proportion_of_original(118287, 0) == 0.0);
  CHECK(format_proportion(118287, 0) == "0.00");
  CHECK_THROWS_AS(proportion_of_original(0, 5), ArgumentError);

  // Exact half-up rounding at a tie: 100 * 1 / 8 = 12.5, 100 * 1 / 1600 = 0.0625.
  CHECK(format_proportion(1, 7) == "12.50");
  CHECK(format_proportion(1, 1599) == "0.06");
  CHECK(format_proportion(1, 799) == "0.13");  // 0.125 rounds up

  std::mt19937_64 rng(17);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t o = rng() % 200000 + 1, a = rng() % 200000 + 1;
    // Skip values that land within float noise of a rounding tie.
    const std::uint64_t scaled = 200000 * o % (o + a);
    if (scaled == 0 || std::gcd(scaled, o + a) * 2 == o + a) continue;
    CHECK(format_proportion(o, a) == approx_percent(o, a));
  }
}

TEST_CASE("summaries combine flip and slot streams") {
  const auto flip = AugmentationSummary::make("Flipping Cars", 12251, 12251);
  const auto ours = AugmentationSummary::make("Ours Cars", 12251, 3262);
  const auto both = combine(flip, ours, "Flipping and Ours Cars");
  CHECK(both.augmented_images == 15513);
  CHECK(both.original_images == 12251);
  CHECK(format_proportion(both.original_images, both.augmented_images) == "44.13");
  const std::vector<AugmentationSummary> rows{flip, ours, both};
  const std::string table = summary_table(rows);
  CHECK(table.find("78.97%") != std::string::npos);
  CHECK(table.find("44.13%") != std::string::npos);
}

TEST_CASE("run_report counts augmented images and skip reasons") {
  AugmentationPlan plan;
  plan.targeted_slots = 7;
  for (int i = 0; i < 5; ++i) plan.assignments.push_back({slot(i + 1, i < 2 ? 1 : i), slot(50 + i, 9)});
  plan.skipped = {{90, std::string(kSkipNoCandidates)}, {91, std::string(kSkipNoCandidates)}};

  ExecutionResult exec;
  for (int i = 0; i < 4; ++i) exec.delta.images.push_back({100 + i, "g.png", 10, 10});
  exec.failures.push_back({3, 3, FailureKind::kIo, "missing"});
  exec.failures.push_back({4, 4, FailureKind::kDegenerate, "tiny"});

  const RunReport r = run_report(plan, exec, 20, "Ours Cars");
  CHECK(r.summary.augmented_images == 4);
  CHECK(r.summary.original_proportion == doctest::Approx(100.0 * 20 / 24));
  CHECK(r.skips == SkipDiagnostics{2, 1, 1});
  CHECK(r.planned_assignments == 5);

  const auto doc = run_report_to_json(r);
  CHECK(doc["summary"]["original_proportion_percent"] == "83.33");
  CHECK(doc["skipped"]["io_failure"] == 1);
  CHECK_FALSE(doc["summary"].contains("formula_proportion_percent"));

  AugmentationPlan all_skipped;
  all_skipped.targeted_slots = 2;
  all_skipped.skipped = {{1, "no_candidates"}, {2, "no_candidates"}};
  const RunReport none = run_report(all_skipped, ExecutionResult{}, 10, "none");
  CHECK(none.summary.augmented_images == 0);
  CHECK(none.summary.original_proportion == 0.0);
  const auto none_doc = run_report_to_json(none);
  CHECK(none_doc["summary"]["original_proportion_percent"] == "0.00");
  CHECK(none_doc["summary"]["formula_proportion_percent"] == "100.00");
}

TEST_CASE("count_images_with") {
  Dataset ds;
  ds.categories = {{1, "a", "s"}, {2, "b", "s"}};
  ds.images = {{1, "1.png", 9, 9}, {2, "2.png", 9, 9}, {3, "3.png", 9, 9}};
  ds.instances = {inst(1, 1, 1, BBox::from_xywh(0, 0, 1, 1)), inst(2, 1, 1, BBox::from_xywh(3, 3, 1, 1)),
                  inst(3, 2, 2, BBox::from_xywh(0, 0, 1, 1))};
  const std::vector<CategoryId> a{1}, both{1, 2}, none{};
  CHECK(count_images_with(ds, a) == 1);
  CHECK(count_images_with(ds, both) == 2);
  CHECK(count_images_with(ds, none) == 3);
}
