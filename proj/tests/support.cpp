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

#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "slotaug/coco_io.hpp"

namespace slotaug::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("slotaug_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

bool interval_overlap(const BBox& a, const BBox& b) {
  const double w = std::max(0.0, std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1()));
  const double h = std::max(0.0, std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1()));
  return w > 0.0 && h > 0.0;
}

std::vector<InstanceId> isolated_ids(const std::vector<Instance>& instances) {
  std::vector<InstanceId> out;
  for (const auto& s : instances) {
    if (s.is_crowd) continue;
    bool alone = true;
    for (const auto& t : instances) {
      if (&t != &s && interval_overlap(s.bbox, t.bbox)) alone = false;
    }
    if (alone) out.push_back(s.id);
  }
  return out;
}

std::uint64_t reference_splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

bool reference_accepts(const SlotView& slot, const SlotView& cand, const FilterSpec& f) {
  if (cand.id == slot.id) return false;
  if (f.exclude_same_image && cand.image == slot.image) return false;
  const double r_lo = slot.ratio * (1.0 - f.ratio_tol), r_hi = slot.ratio * (1.0 + f.ratio_tol);
  if (cand.ratio < r_lo || cand.ratio > r_hi) return false;
  const double a_lo = slot.area * (1.0 - f.scale_tol), a_hi = slot.area * (1.0 + f.scale_tol);
  if (cand.area < a_lo || cand.area > a_hi) return false;
  if (f.mode == 0) return cand.category == slot.category;
  if (f.mode == 1) return cand.supercategory == slot.supercategory;
  return true;
}

std::vector<MiniStep> reference_mini_steps(const Dataset& ds, const testing::FilterSpec& spec) {
  std::map<CategoryId, std::size_t> totals;
  for (const auto& c : ds.categories) totals[c.id] = 0;
  for (const auto& i : ds.instances) ++totals[i.category_id];
  std::vector<std::pair<std::size_t, CategoryId>> order;
  for (const auto& [id, n] : totals) order.emplace_back(n, id);
  std::sort(order.begin(), order.end());

  std::map<CategoryId, std::string> super;
  for (const auto& c : ds.categories) super[c.id] = c.supercategory;

  std::vector<testing::SlotView> all_slots;
  for (const auto& img : ds.images) {
    std::vector<Instance> in_image;
    for (const auto& i : ds.instances)
      if (i.image_id == img.id) in_image.push_back(i);
    for (InstanceId id : testing::isolated_ids(in_image)) {
      const Instance& s = *std::find_if(in_image.begin(), in_image.end(),
                                        [&](const Instance& i) { return i.id == id; });
      all_slots.push_back({s.id, s.image_id, s.category_id, super[s.category_id],
                           s.bbox.width() / s.bbox.height(), s.bbox.width() * s.bbox.height()});
    }
  }

  std::vector<MiniStep> steps;
  std::set<ImageId> selection;
  for (const auto& [count, cat] : order) {
    for (const auto& i : ds.instances)
      if (i.category_id == cat) selection.insert(i.image_id);
    MiniStep st;
    st.selection = selection;
    std::map<CategoryId, double> per_cat;
    for (const auto& c : ds.categories) per_cat[c.id] = 0;
    for (const auto& i : ds.instances) {
      if (!selection.count(i.image_id)) continue;
      ++st.instances;
      per_cat[i.category_id] += 1;
    }
    double mean = 0;
    for (const auto& [id, n] : per_cat) mean += n;
    mean /= per_cat.size();
    double var = 0;
    for (const auto& [id, n] : per_cat) var += (n - mean) * (n - mean);
    st.std_dev = std::sqrt(var / per_cat.size());
    st.all = std::all_of(per_cat.begin(), per_cat.end(), [](const auto& kv) { return kv.second > 0; });
    for (const auto& a : all_slots) {
      if (!selection.count(a.image)) continue;
      ++st.slots;
      for (const auto& b : all_slots) {
        if (selection.count(b.image) && testing::reference_accepts(a, b, spec)) ++st.capacity;
      }
    }
    steps.push_back(st);
  }
  return steps;
}

RasterImage reference_bilinear(const RasterImage& src, int width, int height) {
  const int sw = src.width(), sh = src.height(), ch = src.channels();
  auto coord = [](int d, int s, int dn) {
    float x = (static_cast<float>(d) + 0.5f) * static_cast<float>(s) / static_cast<float>(dn) - 0.5f;
    return std::clamp(x, 0.0f, static_cast<float>(s - 1));
  };
  // Horizontal pass.
  std::vector<float> tmp(static_cast<std::size_t>(width) * sh * ch);
  for (int y = 0; y < sh; ++y) {
    for (int x = 0; x < width; ++x) {
      const float sx = coord(x, sw, width);
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, sw - 1);
      const float t = sx - static_cast<float>(x0);
      for (int c = 0; c < ch; ++c) {
        tmp[(static_cast<std::size_t>(y) * width + x) * ch + c] =
            src.at(x0, y, c) + t * (static_cast<float>(src.at(x1, y, c)) - src.at(x0, y, c));
      }
    }
  }
  // Vertical pass.
  RasterImage out(width, height, ch);
  for (int y = 0; y < height; ++y) {
    const float sy = coord(y, sh, height);
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, sh - 1);
    const float t = sy - static_cast<float>(y0);
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < ch; ++c) {
        const float a = tmp[(static_cast<std::size_t>(y0) * width + x) * ch + c];
        const float b = tmp[(static_cast<std::size_t>(y1) * width + x) * ch + c];
        out.at(x, y, c) = static_cast<std::uint8_t>(std::lround(std::clamp(a + t * (b - a), 0.0f, 255.0f)));
      }
    }
  }
  return out;
}

BBox random_box(std::mt19937_64& rng, int width, int height, int max_side) {
  std::uniform_int_distribution<int> wdist(1, std::min(max_side, width));
  std::uniform_int_distribution<int> hdist(1, std::min(max_side, height));
  const int w = wdist(rng), h = hdist(rng);
  std::uniform_int_distribution<int> xdist(0, width - w);
  std::uniform_int_distribution<int> ydist(0, height - h);
  return BBox::from_xywh(xdist(rng), ydist(rng), w, h);
}

Dataset synthetic_dataset(const SyntheticOptions& o) {
  std::mt19937_64 rng(o.seed);
  Dataset ds;
  for (int c = 0; c < o.categories; ++c) {
    ds.categories.push_back({c + 1, "cat" + std::to_string(c + 1), "super" + std::to_string(c % 2)});
  }
  std::uniform_int_distribution<int> count(1, o.max_boxes);
  std::uniform_int_distribution<int> cat(1, o.categories);
  std::bernoulli_distribution crowd(o.crowd_rate);
  InstanceId next = 1;
  for (int i = 0; i < o.images; ++i) {
    const ImageId id = i + 1;
    ds.images.push_back({id, "img" + std::to_string(id) + ".png", o.width, o.height});
    const int n = count(rng);
    for (int k = 0; k < n; ++k) {
      Instance inst;
      inst.id = next++;
      inst.image_id = id;
      inst.category_id = cat(rng);
      inst.bbox = random_box(rng, o.width, o.height, o.max_side);
      inst.is_crowd = crowd(rng);
      inst.area = inst.bbox.width() * inst.bbox.height();
      ds.instances.push_back(inst);
    }
  }
  return ds;
}

RasterImage noise_image(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RasterImage img(width, height, 3);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng() & 0xff);
  return img;
}

void write_fixture_images(const Dataset& ds, const fs::path& root) {
  for (const auto& rec : ds.images) {
    save_png(noise_image(rec.width, rec.height, static_cast<std::uint64_t>(rec.id) * 7919), root / rec.file_name);
  }
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace slotaug::testing
