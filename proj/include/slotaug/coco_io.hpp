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
#include <string>
#include <string_view>

#include "slotaug/dataset.hpp"
#include "slotaug/raster.hpp"

namespace slotaug {

/// What to do with an annotation whose box is empty, negative, outside its
/// image, or whose area is not positive.
enum class BadBoxPolicy {
  kFail,            // throw IntegrityError naming the annotation
  kSkipWithWarning  // drop the annotation and report it through on_warning
};

struct ParseOptions {
  BadBoxPolicy bad_boxes = BadBoxPolicy::kFail;
  std::function<void(const std::string&)> on_warning;
};

/// Parses COCO-style annotation JSON.
///
/// Requires top-level `images`, `annotations` and `categories` arrays. Boxes
/// are `[x, y, width, height]`; a missing `area` defaults to width * height
/// and a missing `iscrowd` to 0. Throws ParseError (with byte offset) on
/// malformed JSON or schema mismatch and IntegrityError on dangling
/// references, duplicate ids or duplicate category names.
Dataset parse_dataset(std::string_view annotation_json, const ParseOptions& options = {});

Dataset read_dataset(const std::filesystem::path& path, const ParseOptions& options = {});

/// Serializes to COCO JSON with a fixed key order. Integral values are
/// written as integers, so `[10,20,30,40]` stays `[10,20,30,40]`.
std::string serialize_dataset(const Dataset& dataset);

/// Writes serialize_dataset(dataset) to path. Throws IoError.
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// Loads `root / record.file_name` as 3-channel 8-bit BGR.
/// Throws IoError for a missing/undecodable file and DimensionError when the
/// decoded size differs from the record.
RasterImage load_image(const ImageRecord& record, const std::filesystem::path& root);

/// Lossless PNG output. Throws IoError.
void save_png(const RasterImage& image, const std::filesystem::path& path);

/// Reads a whole file into memory. Throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Writes bytes to a file, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace slotaug
