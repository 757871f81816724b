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

#include <random>

#include "doctest.h"
#include "slotaug/errors.hpp"
#include "slotaug/geometry.hpp"
#include "support.hpp"

using namespace slotaug;
using slotaug::testing::interval_overlap;
using slotaug::testing::isolated_ids;

namespace {

BBox box(double x1, double y1, double x2, double y2) { return BBox::from_corners(x1, y1, x2, y2); }

Instance inst(InstanceId id, BBox b, bool crowd = false, ImageId image = 1) {
  Instance i;
  i.id = id;
  i.image_id = image;
  i.category_id = 1;
  i.bbox = b;
  i.is_crowd = crowd;
  i.area = b.area();
  return i;
}

std::vector<InstanceId> ids(const std::vector<Instance>& v) {
  std::vector<InstanceId> out;
  for (const auto& i : v) out.push_back(i.id);
  return out;
}

}  // namespace

TEST_CASE("overlaps: literal conditions") {
  CHECK(overlaps(box(0, 0, 10, 10), box(0, 0, 10, 10)));
  CHECK_FALSE(overlaps(box(0, 0, 10, 10), box(10, 0, 20, 10)));  // shared edge
  CHECK_FALSE(overlaps(box(0, 0, 10, 10), box(20, 20, 30, 30)));
  CHECK(overlaps(box(0, 0, 10, 10), box(5, 5, 15, 15)));
  CHECK(interval_overlap(box(0, 0, 10, 10), box(5, 5, 15, 15)));  // oracle agrees
}

TEST_CASE("overlaps: corner contact and nesting") {
  CHECK_FALSE(overlaps(box(0, 0, 10, 10), box(10, 10, 20, 20)));
  CHECK_FALSE(overlaps(box(0, 0, 10, 10), box(0, 10, 10, 20)));
  CHECK(overlaps(box(0, 0, 10, 10), box(2, 2, 3, 3)));
  CHECK(overlaps(box(2, 2, 3, 3), box(0, 0, 10, 10)));
  CHECK(overlaps(box(0, 0, 0.5, 0.5), box(0.25, 0.25, 1, 1)));
}

TEST_CASE("overlaps: symmetry, reflexivity and oracle equivalence on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(0, 20);
  for (int n = 0; n < 20000; ++n) {
    int ax = coord(rng), ay = coord(rng), bx = coord(rng), by = coord(rng);
    const BBox a = box(ax, ay, ax + 1 + coord(rng) % 8, ay + 1 + coord(rng) % 8);
    const BBox b = box(bx, by, bx + 1 + coord(rng) % 8, by + 1 + coord(rng) % 8);
    REQUIRE(overlaps(a, b) == overlaps(b, a));
    REQUIRE(overlaps(a, a));
    REQUIRE(overlaps(a, b) == interval_overlap(a, b));
  }
}

TEST_CASE("find_isolated: named cases") {
  SUBCASE("single instance") {
    std::vector<Instance> v{inst(1, box(0, 0, 5, 5))};
    CHECK(ids(find_isolated(v)) == std::vector<InstanceId>{1});
  }
  SUBCASE("identical boxes block each other") {
    std::vector<Instance> v{inst(1, box(0, 0, 5, 5)), inst(2, box(0, 0, 5, 5))};
    CHECK(find_isolated(v).empty());
  }
  SUBCASE("three boxes") {
    std::vector<Instance> v{inst(1, box(0, 0, 10, 10)), inst(2, box(5, 5, 15, 15)),
                            inst(3, box(50, 50, 60, 60))};
    CHECK(ids(find_isolated(v)) == isolated_ids(v));
    CHECK(ids(find_isolated(v)) == std::vector<InstanceId>{3});
  }
  SUBCASE("crowd boxes block but are never slots") {
    std::vector<Instance> v{inst(1, box(0, 0, 10, 10), true), inst(2, box(5, 5, 15, 15)),
                            inst(3, box(40, 40, 50, 50), true), inst(4, box(60, 0, 70, 10))};
    CHECK(ids(find_isolated(v)) == std::vector<InstanceId>{4});
  }
  SUBCASE("order preserved") {
    std::vector<Instance> v{inst(9, box(30, 0, 40, 10)), inst(2, box(0, 0, 10, 10)),
                            inst(5, box(10, 0, 20, 10))};
    CHECK(ids(find_isolated(v)) == std::vector<InstanceId>{9, 2, 5});
  }
  SUBCASE("empty input") { CHECK(find_isolated(std::vector<Instance>{}).empty()); }
}

TEST_CASE("find_isolated rejects mixed images") {
  std::vector<Instance> v{inst(1, box(0, 0, 1, 1), false, 1), inst(2, box(5, 5, 6, 6), false, 2)};
  CHECK_THROWS_AS(find_isolated(v), ArgumentError);
}

TEST_CASE("find_isolated matches the quadratic oracle on random images") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> count(0, 30);
  std::bernoulli_distribution crowd(0.1);
  for (int image = 0; image < 300; ++image) {
    std::vector<Instance> v;
    const int n = count(rng);
    for (int k = 0; k < n; ++k) {
      v.push_back(inst(k + 1, testing::random_box(rng, 200, 150, 40), crowd(rng)));
    }
    REQUIRE(ids(find_isolated(v)) == isolated_ids(v));
  }
}
