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

#include "slotaug/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "slotaug/errors.hpp"

namespace slotaug {
namespace {

struct Tap {
  int lo = 0;
  int hi = 0;
  double frac = 0.0;
};

// Source taps for each destination coordinate along one axis.
std::vector<Tap> make_taps(int src, int dst) {
  std::vector<Tap> taps(static_cast<std::size_t>(dst));
  const double scale = static_cast<double>(src) / dst;
  for (int d = 0; d < dst; ++d) {
    double s = (d + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src - 1));
    Tap& t = taps[static_cast<std::size_t>(d)];
    t.lo = static_cast<int>(std::floor(s));
    t.hi = std::min(t.lo + 1, src - 1);
    t.frac = s - t.lo;
  }
  return taps;
}

}  // namespace

RasterImage::RasterImage(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0 || channels <= 0) {
    throw ArgumentError("raster dimensions must be positive");
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

RasterImage crop(const RasterImage& image, const PixelRect& rect) {
  if (rect.empty() || rect.x0 < 0 || rect.y0 < 0 || rect.x1 > image.width() ||
      rect.y1 > image.height()) {
    throw ArgumentError("crop rectangle outside image");
  }
  RasterImage out(rect.width(), rect.height(), image.channels());
  const std::size_t bytes = static_cast<std::size_t>(rect.width()) * image.channels();
  for (int y = 0; y < rect.height(); ++y) {
    const auto src = image.row(rect.y0 + y).subspan(
        static_cast<std::size_t>(rect.x0) * image.channels(), bytes);
    std::memcpy(out.row(y).data(), src.data(), bytes);
  }
  return out;
}

RasterImage resize_bilinear(const RasterImage& image, int width, int height) {
  if (image.empty() || width <= 0 || height <= 0) {
    throw ArgumentError("resize needs a non-empty image and a positive target size");
  }
  if (width == image.width() && height == image.height()) return image;

  const auto xs = make_taps(image.width(), width);
  const auto ys = make_taps(image.height(), height);
  const int channels = image.channels();
  RasterImage out(width, height, channels);
  for (int y = 0; y < height; ++y) {
    const Tap& ty = ys[static_cast<std::size_t>(y)];
    for (int x = 0; x < width; ++x) {
      const Tap& tx = xs[static_cast<std::size_t>(x)];
      for (int c = 0; c < channels; ++c) {
        const double top =
            (1.0 - tx.frac) * image.at(tx.lo, ty.lo, c) + tx.frac * image.at(tx.hi, ty.lo, c);
        const double bottom =
            (1.0 - tx.frac) * image.at(tx.lo, ty.hi, c) + tx.frac * image.at(tx.hi, ty.hi, c);
        const double v = (1.0 - ty.frac) * top + ty.frac * bottom;
        out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

void paste(RasterImage& image, const RasterImage& patch, int x, int y) {
  if (patch.channels() != image.channels()) throw ArgumentError("paste channel mismatch");
  if (x < 0 || y < 0 || x + patch.width() > image.width() || y + patch.height() > image.height()) {
    throw ArgumentError("paste rectangle outside image");
  }
  const std::size_t bytes = static_cast<std::size_t>(patch.width()) * patch.channels();
  for (int row = 0; row < patch.height(); ++row) {
    auto dst = image.row(y + row).subspan(static_cast<std::size_t>(x) * image.channels(), bytes);
    std::memcpy(dst.data(), patch.row(row).data(), bytes);
  }
}

RasterImage mirror_horizontal(const RasterImage& image) {
  if (image.empty()) return image;
  RasterImage out(image.width(), image.height(), image.channels());
  const int w = image.width();
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < image.channels(); ++c) out.at(w - 1 - x, y, c) = image.at(x, y, c);
    }
  }
  return out;
}

}  // namespace slotaug
