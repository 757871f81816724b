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

#include <iosfwd>

namespace slotaug {

/// Axis-aligned rectangle in (fractional) pixel coordinates.
///
/// The box is stored as origin plus extent, exactly as COCO serializes it,
/// and exposes the top-left (x1, y1) and bottom-right (x2, y2) corners as
/// derived values. Keeping the extent as the stored quantity means the width
/// and height of a parsed box are bit-identical to the annotation's
/// `bbox[2]`/`bbox[3]`, which corner storage cannot guarantee for
/// fractional coordinates.
class BBox {
 public:
  constexpr BBox() = default;

  static constexpr BBox from_xywh(double x, double y, double w, double h) {
    BBox b;
    b.x_ = x;
    b.y_ = y;
    b.w_ = w;
    b.h_ = h;
    return b;
  }

  /// Builds a box from corners; width/height become x2 - x1 and y2 - y1.
  static constexpr BBox from_corners(double x1, double y1, double x2, double y2) {
    return from_xywh(x1, y1, x2 - x1, y2 - y1);
  }

  constexpr double x1() const { return x_; }
  constexpr double y1() const { return y_; }
  constexpr double x2() const { return x_ + w_; }
  constexpr double y2() const { return y_ + h_; }
  constexpr double width() const { return w_; }
  constexpr double height() const { return h_; }
  constexpr double area() const { return w_ * h_; }
  constexpr double aspect_ratio() const { return w_ / h_; }

  /// x1 < x2 and y1 < y2.
  constexpr bool valid() const { return w_ > 0.0 && h_ > 0.0; }

  /// True when the box lies inside [0, width] x [0, height].
  constexpr bool inside(double image_width, double image_height) const {
    return x_ >= 0.0 && y_ >= 0.0 && x2() <= image_width && y2() <= image_height;
  }

  friend constexpr bool operator==(const BBox&, const BBox&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double w_ = 0.0;
  double h_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const BBox& b);

}  // namespace slotaug
