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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace slotaug {

/// Interleaved 8-bit raster, row-major, `channels` samples per pixel.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }

  std::uint8_t& at(int x, int y, int c) { return data_[offset(x, y, c)]; }
  std::uint8_t at(int x, int y, int c) const { return data_[offset(x, y, c)]; }

  std::span<std::uint8_t> row(int y) {
    return {data_.data() + offset(0, y, 0), static_cast<std::size_t>(width_) * channels_};
  }
  std::span<const std::uint8_t> row(int y) const {
    return {data_.data() + offset(0, y, 0), static_cast<std::size_t>(width_) * channels_};
  }

  std::span<std::uint8_t> data() { return data_; }
  std::span<const std::uint8_t> data() const { return data_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t offset(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Integer pixel rectangle, half-open: [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }

  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

RasterImage crop(const RasterImage& image, const PixelRect& rect);

/// Bilinear resize with pixel-centre alignment: destination pixel d samples
/// the source at (d + 0.5) * src / dst - 0.5, clamped to the edge. Results
/// are rounded half-up. A same-size resize returns the input unchanged.
RasterImage resize_bilinear(const RasterImage& image, int width, int height);

/// Copies `patch` into `image` with its top-left corner at (x, y).
void paste(RasterImage& image, const RasterImage& patch, int x, int y);

/// Left-right mirror.
RasterImage mirror_horizontal(const RasterImage& image);

}  // namespace slotaug
