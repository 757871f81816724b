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

// Test-only helpers: synthetic fixtures and independent oracles. Nothing in
// here calls into the code paths it is used to check.

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "slotaug/dataset.hpp"
#include "slotaug/raster.hpp"

namespace slotaug::testing {

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// ---- oracles ---------------------------------------------------------------

/// Positive-area interval intersection.
bool interval_overlap(const BBox& a, const BBox& b);

/// { s : s non-crowd and no other t overlaps s } by direct all-pairs check.
std::vector<InstanceId> isolated_ids(const std::vector<Instance>& instances);

/// splitmix64 written out step by step from the published constants.
std::uint64_t reference_splitmix64(std::uint64_t x);

/// Attribute filters transcribed as plain set predicates.
struct FilterSpec {
  double ratio_tol = 0.2;
  double scale_tol = 0.2;
  int mode = 0;  // 0 same category, 1 same supercategory, 2 any
  bool exclude_same_image = true;
};

struct SlotView {
  InstanceId id;
  ImageId image;
  CategoryId category;
  std::string supercategory;
  double ratio;
  double area;
};

bool reference_accepts(const SlotView& slot, const SlotView& cand, const FilterSpec& f);

struct MiniStep {
  std::set<ImageId> selection;
  std::size_t instances = 0;
  std::size_t slots = 0;
  double std_dev = 0;
  bool all = false;
  std::uint64_t capacity = 0;
};

/// Greedy mini-dataset steps recomputed from scratch with plain loops;
/// capacity counts pairs accepted by reference_accepts.
std::vector<MiniStep> reference_mini_steps(const Dataset& ds, const FilterSpec& spec);

/// Separable two-pass bilinear resampler in float.
RasterImage reference_bilinear(const RasterImage& src, int width, int height);

// ---- fixtures ---------------------------------------------------------------

/// Random integer box fully inside a width x height image.
BBox random_box(std::mt19937_64& rng, int width, int height, int max_side);

struct SyntheticOptions {
  int images = 20;
  int categories = 4;
  int max_boxes = 6;
  int width = 64;
  int height = 48;
  int max_side = 24;
  double crowd_rate = 0.05;
  std::uint64_t seed = 1;
};

/// Dataset with integer boxes; category k has supercategory "super<k % 2>".
Dataset synthetic_dataset(const SyntheticOptions& options);

/// Deterministic noise image so pasted regions are distinguishable.
RasterImage noise_image(int width, int height, std::uint64_t seed);

/// Writes a noise PNG for every image record under `root`.
void write_fixture_images(const Dataset& ds, const std::filesystem::path& root);

/// Reads a whole file (test convenience).
std::string slurp(const std::filesystem::path& path);

}  // namespace slotaug::testing
