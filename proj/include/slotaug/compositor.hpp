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

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slotaug/dataset.hpp"
#include "slotaug/matcher.hpp"
#include "slotaug/raster.hpp"

namespace slotaug {

/// Snaps a fractional box to pixels: every corner is rounded half-up
/// (floor(v + 0.5)) and the result clamped to the image.
PixelRect snap_to_pixels(const BBox& box, int image_width, int image_height);

/// Crops `donor` at `candidate_box`, bilinearly resizes the crop to the
/// snapped `slot_box` rectangle and pastes it into a copy of `source`.
/// Pixels outside the snapped slot rectangle are untouched. Throws
/// SubstitutionError when either snapped rectangle is empty.
RasterImage substitute(const RasterImage& source, const BBox& slot_box, const RasterImage& donor,
                       const BBox& candidate_box);

enum class FailureKind { kNoCandidates, kDegenerate, kIo };

std::string_view to_string(FailureKind kind);

struct SubstitutionFailure {
  ImageId image_id = 0;
  InstanceId slot_id = 0;
  FailureKind kind = FailureKind::kIo;
  std::string message;

  friend bool operator==(const SubstitutionFailure&, const SubstitutionFailure&) = default;
};

/// One image produced by the compositor. Annotation ids and image id are
/// the source's until execute_plan renumbers them.
struct GeneratedImage {
  ImageId source_image_id = 0;
  ImageId new_image_id = 0;
  std::string file_name;
  RasterImage pixels;
  std::vector<Instance> annotations;
  std::vector<std::pair<InstanceId, InstanceId>> provenance;  // (slot, candidate)
};

using DonorLoader = std::function<RasterImage(ImageId)>;

struct ComposeOutcome {
  GeneratedImage image;
  std::vector<SubstitutionFailure> failures;
};

/// Applies `assignments` (all hosted by `source_record`) to `source` in
/// order. Failed substitutions are reported and leave their slot untouched;
/// the slot keeps its original category. `image.provenance` lists the
/// substitutions that succeeded.
ComposeOutcome compose_image(const RasterImage& source, const ImageRecord& source_record,
                             std::span<const Instance> source_annotations,
                             std::span<const Assignment> assignments, const DonorLoader& donors);

/// `<stem>_slot<id>_cand<id>[...].png` for the given substitutions.
std::string generated_file_name(std::string_view source_file_name,
                                std::span<const std::pair<InstanceId, InstanceId>> provenance);

struct ExecuteOptions {
  // One output image per assignment instead of one per source image.
  bool emit_per_slot = false;
  int jobs = 1;
};

struct ExecutionResult {
  /// New images and their annotations, with all source categories.
  Dataset delta;
  /// Generated image metadata in delta order; pixels are not retained.
  std::vector<GeneratedImage> generated;
  std::vector<SubstitutionFailure> failures;
};

/// Executes `plan` against `dataset`: reads images from `image_root`, writes
/// PNGs to `out_root` and returns the annotation delta. New image and
/// annotation ids continue from the dataset's maximum ids in stable
/// source-image order, independent of `options.jobs`.
ExecutionResult execute_plan(const AugmentationPlan& plan, const Dataset& dataset,
                             const std::filesystem::path& image_root,
                             const std::filesystem::path& out_root,
                             const ExecuteOptions& options = {});

/// Mirrors pixels left-right and maps each box (x1, y1, x2, y2) to
/// (W - x2, y1, W - x1, y2).
std::pair<RasterImage, std::vector<Instance>> flip_horizontal(const RasterImage& image,
                                                              std::span<const Instance> annotations);

/// Box-only part of flip_horizontal.
BBox flip_box(const BBox& box, double image_width);

}  // namespace slotaug
