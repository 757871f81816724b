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

#include "slotaug/compositor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "slotaug/coco_io.hpp"
#include "slotaug/errors.hpp"
#include "slotaug/parallel.hpp"

namespace slotaug {
namespace {

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

void substitute_into(RasterImage& target, const BBox& slot_box, const RasterImage& donor,
                     const BBox& candidate_box) {
  const PixelRect dst = snap_to_pixels(slot_box, target.width(), target.height());
  if (dst.empty()) throw SubstitutionError("slot rectangle is empty after pixel snapping");
  const PixelRect src = snap_to_pixels(candidate_box, donor.width(), donor.height());
  if (src.empty()) throw SubstitutionError("candidate rectangle is empty after pixel snapping");
  if (donor.channels() != target.channels()) {
    throw SubstitutionError("donor and source channel counts differ");
  }
  paste(target, resize_bilinear(crop(donor, src), dst.width(), dst.height()), dst.x0, dst.y0);
}

std::string stem_of(std::string_view file_name) {
  return std::filesystem::path(std::string(file_name)).stem().string();
}

struct Unit {
  ImageId image_id = 0;
  std::vector<Assignment> assignments;
};

struct UnitOutcome {
  std::optional<GeneratedImage> image;  // without pixels
  std::vector<SubstitutionFailure> failures;
};

std::vector<SubstitutionFailure> fail_all(const Unit& unit, FailureKind kind,
                                          const std::string& message) {
  std::vector<SubstitutionFailure> out;
  for (const auto& a : unit.assignments) {
    out.push_back({unit.image_id, a.slot.instance_id, kind, message});
  }
  return out;
}

}  // namespace

std::string_view to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::kNoCandidates:
      return "no_candidates";
    case FailureKind::kDegenerate:
      return "degenerate_rectangle";
    case FailureKind::kIo:
      return "io_failure";
  }
  return "?";
}

PixelRect snap_to_pixels(const BBox& box, int image_width, int image_height) {
  PixelRect r;
  r.x0 = std::clamp(round_half_up(box.x1()), 0, image_width);
  r.y0 = std::clamp(round_half_up(box.y1()), 0, image_height);
  r.x1 = std::clamp(round_half_up(box.x2()), 0, image_width);
  r.y1 = std::clamp(round_half_up(box.y2()), 0, image_height);
  return r;
}

RasterImage substitute(const RasterImage& source, const BBox& slot_box, const RasterImage& donor,
                       const BBox& candidate_box) {
  RasterImage out = source;
  substitute_into(out, slot_box, donor, candidate_box);
  return out;
}

std::string generated_file_name(std::string_view source_file_name,
                                std::span<const std::pair<InstanceId, InstanceId>> provenance) {
  std::string name = stem_of(source_file_name);
  for (const auto& [slot, candidate] : provenance) {
    name += "_slot" + std::to_string(slot) + "_cand" + std::to_string(candidate);
  }
  return name + ".png";
}

ComposeOutcome compose_image(const RasterImage& source, const ImageRecord& source_record,
                             std::span<const Instance> source_annotations,
                             std::span<const Assignment> assignments, const DonorLoader& donors) {
  ComposeOutcome result;
  GeneratedImage& gen = result.image;
  gen.source_image_id = source_record.id;
  gen.new_image_id = source_record.id;
  gen.pixels = source;
  gen.annotations.assign(source_annotations.begin(), source_annotations.end());

  std::map<ImageId, RasterImage> donor_cache;
  for (const Assignment& a : assignments) {
    if (a.slot.image_id != source_record.id) {
      throw ArgumentError("slot " + std::to_string(a.slot.instance_id) +
                          " does not belong to image " + std::to_string(source_record.id));
    }
    const auto fail = [&](FailureKind kind, const std::string& message) {
      result.failures.push_back({source_record.id, a.slot.instance_id, kind, message});
    };
    try {
      auto it = donor_cache.find(a.candidate.image_id);
      if (it == donor_cache.end()) {
        it = donor_cache.emplace(a.candidate.image_id, donors(a.candidate.image_id)).first;
      }
      substitute_into(gen.pixels, a.slot.bbox, it->second, a.candidate.bbox);
    } catch (const SubstitutionError& e) {
      fail(FailureKind::kDegenerate, e.what());
      continue;
    } catch (const IoError& e) {
      fail(FailureKind::kIo, e.what());
      continue;
    } catch (const DimensionError& e) {
      fail(FailureKind::kIo, e.what());
      continue;
    }
    for (Instance& inst : gen.annotations) {
      if (inst.id != a.slot.instance_id) continue;
      inst.category_id = a.candidate.category_id;
      // The pasted donor fills the whole rectangle.
      inst.area = inst.bbox.area();
    }
    gen.provenance.emplace_back(a.slot.instance_id, a.candidate.instance_id);
  }
  gen.file_name = generated_file_name(source_record.file_name, gen.provenance);
  return result;
}

ExecutionResult execute_plan(const AugmentationPlan& plan, const Dataset& dataset,
                             const std::filesystem::path& image_root,
                             const std::filesystem::path& out_root,
                             const ExecuteOptions& options) {
  const DatasetIndex index(dataset);

  std::map<ImageId, std::vector<Assignment>> by_image;
  for (const Assignment& a : plan.assignments) by_image[a.slot.image_id].push_back(a);

  std::vector<Unit> units;
  for (auto& [image_id, assignments] : by_image) {
    if (options.emit_per_slot) {
      for (const Assignment& a : assignments) units.push_back({image_id, {a}});
    } else {
      units.push_back({image_id, std::move(assignments)});
    }
  }

  const DonorLoader donors = [&](ImageId id) {
    const ImageRecord* rec = index.image(id);
    if (rec == nullptr) throw IoError("donor image " + std::to_string(id) + " not in dataset", "");
    return load_image(*rec, image_root);
  };

  std::vector<UnitOutcome> outcomes(units.size());
  parallel_for(units.size(), options.jobs, [&](std::size_t u) {
    const Unit& unit = units[u];
    UnitOutcome& out = outcomes[u];
    const ImageRecord* record = index.image(unit.image_id);
    if (record == nullptr) {
      out.failures = fail_all(unit, FailureKind::kIo, "source image not in dataset");
      return;
    }
    RasterImage source;
    try {
      source = load_image(*record, image_root);
    } catch (const Error& e) {
      out.failures = fail_all(unit, FailureKind::kIo, e.what());
      return;
    }
    std::vector<Instance> annotations;
    for (std::size_t pos : index.instances_of(unit.image_id)) {
      annotations.push_back(dataset.instances[pos]);
    }
    ComposeOutcome composed = compose_image(source, *record, annotations, unit.assignments, donors);
    out.failures = std::move(composed.failures);
    if (composed.image.provenance.empty()) return;
    try {
      save_png(composed.image.pixels, out_root / composed.image.file_name);
    } catch (const IoError& e) {
      for (const auto& [slot, cand] : composed.image.provenance) {
        out.failures.push_back({unit.image_id, slot, FailureKind::kIo, e.what()});
      }
      return;
    }
    composed.image.pixels = RasterImage();
    out.image = std::move(composed.image);
  });

  ImageId next_image = 0;
  for (const auto& img : dataset.images) next_image = std::max(next_image, img.id);
  InstanceId next_instance = 0;
  for (const auto& inst : dataset.instances) next_instance = std::max(next_instance, inst.id);

  ExecutionResult result;
  result.delta.categories = dataset.categories;
  for (std::size_t u = 0; u < units.size(); ++u) {
    UnitOutcome& out = outcomes[u];
    result.failures.insert(result.failures.end(), out.failures.begin(), out.failures.end());
    if (!out.image) continue;
    GeneratedImage& gen = *out.image;
    const ImageRecord* source = index.image(gen.source_image_id);
    gen.new_image_id = ++next_image;
    result.delta.images.push_back({gen.new_image_id, gen.file_name, source->width, source->height});
    for (Instance& inst : gen.annotations) {
      inst.id = ++next_instance;
      inst.image_id = gen.new_image_id;
      result.delta.instances.push_back(inst);
    }
    result.generated.push_back(std::move(gen));
  }
  return result;
}

BBox flip_box(const BBox& box, double image_width) {
  return BBox::from_xywh(image_width - box.x2(), box.y1(), box.width(), box.height());
}

std::pair<RasterImage, std::vector<Instance>> flip_horizontal(
    const RasterImage& image, std::span<const Instance> annotations) {
  std::vector<Instance> flipped(annotations.begin(), annotations.end());
  for (Instance& inst : flipped) inst.bbox = flip_box(inst.bbox, image.width());
  return {mirror_horizontal(image), std::move(flipped)};
}

}  // namespace slotaug
