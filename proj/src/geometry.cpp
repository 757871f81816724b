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

#include "slotaug/geometry.hpp"

#include <string>

#include "slotaug/errors.hpp"

namespace slotaug {

std::vector<std::size_t> find_isolated_indices(std::span<const Instance> instances) {
  for (const auto& inst : instances) {
    if (inst.image_id != instances.front().image_id) {
      throw ArgumentError("find_isolated: instances span images " +
                          std::to_string(instances.front().image_id) + " and " +
                          std::to_string(inst.image_id));
    }
  }
  const std::size_t n = instances.size();
  std::vector<bool> blocked(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (overlaps(instances[i].bbox, instances[j].bbox)) {
        blocked[i] = true;
        blocked[j] = true;
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!blocked[i] && !instances[i].is_crowd) out.push_back(i);
  }
  return out;
}

std::vector<Instance> find_isolated(std::span<const Instance> instances) {
  std::vector<Instance> out;
  for (std::size_t i : find_isolated_indices(instances)) out.push_back(instances[i]);
  return out;
}

}  // namespace slotaug
