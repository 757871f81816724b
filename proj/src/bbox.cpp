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

#include "slotaug/bbox.hpp"

#include <ostream>

namespace slotaug {

std::ostream& operator<<(std::ostream& os, const BBox& b) {
  return os << "(" << b.x1() << ", " << b.y1() << ", " << b.x2() << ", " << b.y2() << ")";
}

}  // namespace slotaug
