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

#include <span>
#include <vector>

#include "slotaug/bbox.hpp"
#include "slotaug/dataset.hpp"

namespace slotaug {

/// Two boxes overlap iff all of
///   a.x1 < b.x2,  a.x2 > b.x1,  a.y1 < b.y2,  a.y2 > b.y1
/// hold. The inequalities are strict, so boxes that only share an edge or a
/// corner do not overlap.
constexpr bool overlaps(const BBox& a, const BBox& b) {
  return a.x1() < b.x2() && a.x2() > b.x1() && a.y1() < b.y2() && a.y2() > b.y1();
}

/// Returns the non-crowd instances whose box overlaps no other instance of
/// the same image, in input order. Crowd boxes are never returned but still
/// block their neighbours. Throws ArgumentError on mixed image ids.
std::vector<Instance> find_isolated(std::span<const Instance> instances);

/// Index form of find_isolated: positions into `instances`.
std::vector<std::size_t> find_isolated_indices(std::span<const Instance> instances);

}  // namespace slotaug
