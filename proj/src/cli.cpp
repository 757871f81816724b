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

#include "slotaug/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slotaug/coco_io.hpp"
#include "slotaug/compositor.hpp"
#include "slotaug/errors.hpp"
#include "slotaug/matcher.hpp"
#include "slotaug/mini_dataset.hpp"
#include "slotaug/parallel.hpp"
#include "slotaug/slot_db.hpp"
#include "slotaug/stats_report.hpp"

namespace slotaug {
namespace {

namespace fs = std::filesystem;

constexpr int kExitError = 1;

struct RunConfig {
  std::string annotations;
  std::string images;
  std::string out;
  std::string slot_db;
  std::string plan;
  std::vector<std::string> categories;
  std::string supercategory;
  double ratio_tol = 0.20;
  double scale_tol = 0.20;
  std::string category_mode = "same_category";
  std::optional<std::uint64_t> seed;
  bool emit_per_slot = false;
  std::optional<std::size_t> select_step;
  int jobs = 1;
  bool skip_bad_boxes = false;
  bool allow_same_image = false;
  bool no_ratio_filter = false;
  bool no_scale_filter = false;
};

/// Reported to the user as "error: <message>" with a non-zero exit.
class UsageError : public Error {
 public:
  using Error::Error;
};

void require(const std::string& value, const char* flag, const char* command) {
  if (value.empty()) {
    throw UsageError(std::string(command) + " requires " + flag);
  }
}

FilterConfig filter_config(const RunConfig& rc) {
  FilterConfig cfg;
  cfg.ratio_tolerance = rc.ratio_tol;
  cfg.scale_tolerance = rc.scale_tol;
  cfg.category_mode = parse_category_mode(rc.category_mode);
  cfg.exclude_same_image = !rc.allow_same_image;
  cfg.ratio_filter = !rc.no_ratio_filter;
  cfg.scale_filter = !rc.no_scale_filter;
  cfg.seed = rc.seed.value_or(0);
  cfg.validate();
  return cfg;
}

Dataset load_dataset(const RunConfig& rc, const char* command, std::ostream& err) {
  require(rc.annotations, "--annotations", command);
  ParseOptions opts;
  if (rc.skip_bad_boxes) {
    opts.bad_boxes = BadBoxPolicy::kSkipWithWarning;
    opts.on_warning = [&err](const std::string& w) { err << "warning: " << w << '\n'; };
  }
  return read_dataset(rc.annotations, opts);
}

SlotDatabase load_or_build_slots(const RunConfig& rc, const Dataset& ds) {
  if (!rc.slot_db.empty() && fs::exists(rc.slot_db)) return read_slot_database(rc.slot_db);
  return build_slot_database(ds, rc.jobs);
}

// Resolves --category / --supercategory into a slot query; an empty query
// targets every slot.
SlotQuery resolve_target(const RunConfig& rc, const Dataset& ds) {
  SlotQuery q;
  const DatasetIndex index(ds);
  for (const auto& name : rc.categories) {
    const CategoryRecord* c = index.category_by_name(name);
    if (c == nullptr) {
      std::string valid;
      for (const auto& cat : ds.categories) valid += (valid.empty() ? "" : ", ") + cat.name;
      throw UsageError("unknown category '" + name + "'; valid names: " + valid);
    }
    q.category_ids.push_back(c->id);
  }
  if (!rc.supercategory.empty()) {
    const bool known = std::any_of(ds.categories.begin(), ds.categories.end(),
                                   [&](const auto& c) { return c.supercategory == rc.supercategory; });
    if (!known) throw UsageError("unknown supercategory '" + rc.supercategory + "'");
    q.supercategory = rc.supercategory;
  }
  return q;
}

std::vector<CategoryId> target_categories(const SlotQuery& q, const Dataset& ds) {
  std::vector<CategoryId> ids = q.category_ids;
  if (q.supercategory) {
    for (const auto& c : ds.categories) {
      if (c.supercategory == *q.supercategory &&
          (q.category_ids.empty() ||
           std::find(q.category_ids.begin(), q.category_ids.end(), c.id) != q.category_ids.end())) {
        ids.push_back(c.id);
      }
    }
    if (!q.category_ids.empty()) ids.erase(ids.begin(), ids.begin() + q.category_ids.size());
  }
  return ids;
}

std::string target_label(const RunConfig& rc) {
  std::string label;
  for (const auto& c : rc.categories) label += (label.empty() ? "" : "+") + c;
  if (!rc.supercategory.empty()) label += (label.empty() ? "" : "/") + rc.supercategory;
  return label.empty() ? "all categories" : label;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

int cmd_init(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Dataset ds = load_dataset(rc, "init", err);
  fs::path target = rc.slot_db;
  if (target.empty()) {
    require(rc.out, "--slot-db or --out", "init");
    target = fs::path(rc.out) / "slots.json";
  }
  const SlotDatabase db = build_slot_database(ds, rc.jobs);
  write_slot_database(db, target);
  out << "images: " << ds.images.size() << "\ninstances: " << ds.instances.size()
      << "\nslots: " << db.size() << "\nslot database: " << target.string() << '\n';
  return 0;
}

int cmd_stats(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Dataset ds = load_dataset(rc, "stats", err);
  const SlotDatabase db = load_or_build_slots(rc, ds);
  const auto stats = category_stats(ds, db);
  out << category_stats_table(stats);
  out << "images: " << ds.images.size() << "  instances: " << ds.instances.size()
      << "  slots: " << db.size() << '\n';
  if (!rc.out.empty()) {
    write_file(fs::path(rc.out) / "category_stats.csv", category_stats_csv(stats));
    write_json(fs::path(rc.out) / "category_stats.json", category_stats_json(stats));
  }
  return 0;
}

AugmentationPlan make_plan(const RunConfig& rc, const Dataset& ds, const SlotDatabase& db,
                           const SlotQuery& target, const char* command) {
  if (!rc.seed) throw UsageError(std::string(command) + " requires --seed");
  return build_plan(db, target, filter_config(rc), ds.categories, rc.jobs);
}

void print_plan(const AugmentationPlan& plan, std::ostream& out) {
  out << "targeted slots: " << plan.targeted_slots << "\nassignments: " << plan.assignments.size()
      << "\nskipped (no candidates): " << plan.skipped.size() << '\n';
}

int cmd_plan(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Dataset ds = load_dataset(rc, "plan", err);
  require(rc.out, "--out", "plan");
  const SlotDatabase db = load_or_build_slots(rc, ds);
  const SlotQuery target = resolve_target(rc, ds);
  const AugmentationPlan plan = make_plan(rc, ds, db, target, "plan");
  write_json(fs::path(rc.out) / "plan.json", plan_to_json(plan));
  print_plan(plan, out);
  return 0;
}

int cmd_augment(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Dataset ds = load_dataset(rc, "augment", err);
  require(rc.images, "--images", "augment");
  require(rc.out, "--out", "augment");
  const SlotDatabase db = load_or_build_slots(rc, ds);
  const SlotQuery target = resolve_target(rc, ds);

  AugmentationPlan plan;
  if (!rc.plan.empty()) {
    nlohmann::json doc;
    const std::string bytes = read_file(rc.plan);
    try {
      doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.what(), e.byte);
    }
    plan = plan_from_json(doc, db);
    validate_plan(plan, ds.categories);
  } else {
    plan = make_plan(rc, ds, db, target, "augment");
  }

  const fs::path out_root(rc.out);
  write_json(out_root / "plan.json", plan_to_json(plan));
  ExecuteOptions opts;
  opts.emit_per_slot = rc.emit_per_slot;
  opts.jobs = rc.jobs;
  const ExecutionResult result = execute_plan(plan, ds, rc.images, out_root / "images", opts);
  write_dataset(result.delta, out_root / "annotations_augmented.json");

  const auto ids = target_categories(target, ds);
  const RunReport report =
      run_report(plan, result, count_images_with(ds, ids), "slot substitution (" + target_label(rc) + ")");
  auto doc = run_report_to_json(report);
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const auto& f : result.failures) {
    nlohmann::ordered_json o;
    o["image_id"] = f.image_id;
    o["slot"] = f.slot_id;
    o["reason"] = std::string(to_string(f.kind));
    o["message"] = f.message;
    failures.push_back(std::move(o));
  }
  doc["failures"] = std::move(failures);
  write_json(out_root / "report.json", doc);

  print_plan(plan, out);
  if (plan.targeted_slots == 0) out << "note: the target selects zero slots\n";
  const AugmentationSummary rows[] = {report.summary};
  out << summary_table(rows);
  out << "skipped: no_candidates=" << report.skips.no_candidates
      << " degenerate_rectangle=" << report.skips.degenerate
      << " io_failure=" << report.skips.io_failure << '\n';
  return 0;
}

int cmd_minify(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Dataset ds = load_dataset(rc, "minify", err);
  require(rc.out, "--out", "minify");
  if (ds.categories.empty()) throw UsageError("minify needs at least one category");
  const SlotDatabase db = load_or_build_slots(rc, ds);
  MiniDatasetResult result = build_mini_dataset(ds, db, filter_config(rc));
  const fs::path out_root(rc.out);
  const std::string csv = records_to_csv(result.records);
  write_file(out_root / "mini_steps.csv", csv);
  out << csv;
  if (rc.select_step) {
    const Dataset mini = select_step(result, ds, *rc.select_step);
    result.chosen_step = rc.select_step;
    write_dataset(mini, out_root / "mini_annotations.json");
    out << "selected step " << *rc.select_step << ": " << mini.images.size() << " images, "
        << mini.instances.size() << " instances\n";
  }
  return 0;
}

int cmd_flip(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Dataset ds = load_dataset(rc, "flip", err);
  require(rc.images, "--images", "flip");
  require(rc.out, "--out", "flip");
  const SlotQuery target = resolve_target(rc, ds);
  const auto ids = target_categories(target, ds);
  const bool restricted = !rc.categories.empty() || !rc.supercategory.empty();
  const DatasetIndex index(ds);

  std::vector<const ImageRecord*> chosen;
  for (const auto& img : ds.images) {
    bool take = !restricted;
    for (std::size_t pos : index.instances_of(img.id)) {
      if (take) break;
      take = std::find(ids.begin(), ids.end(), ds.instances[pos].category_id) != ids.end();
    }
    if (take) chosen.push_back(&img);
  }

  const fs::path out_root(rc.out);
  struct Flipped {
    std::string file_name;
    std::vector<Instance> annotations;
    std::string error;
  };
  std::vector<Flipped> flipped(chosen.size());
  parallel_for(chosen.size(), rc.jobs, [&](std::size_t i) {
    const ImageRecord& rec = *chosen[i];
    std::vector<Instance> anns;
    for (std::size_t pos : index.instances_of(rec.id)) anns.push_back(ds.instances[pos]);
    try {
      auto [pixels, boxes] = flip_horizontal(load_image(rec, rc.images), anns);
      const std::string name = fs::path(rec.file_name).stem().string() + "_flip.png";
      save_png(pixels, out_root / "images" / name);
      flipped[i] = {name, std::move(boxes), {}};
    } catch (const Error& e) {
      flipped[i].error = e.what();
    }
  });

  ImageId next_image = 0;
  for (const auto& img : ds.images) next_image = std::max(next_image, img.id);
  InstanceId next_instance = 0;
  for (const auto& inst : ds.instances) next_instance = std::max(next_instance, inst.id);
  Dataset delta;
  delta.categories = ds.categories;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (!flipped[i].error.empty()) {
      ++failures;
      err << "warning: image " << chosen[i]->id << ": " << flipped[i].error << '\n';
      continue;
    }
    const ImageId id = ++next_image;
    delta.images.push_back({id, flipped[i].file_name, chosen[i]->width, chosen[i]->height});
    for (Instance inst : flipped[i].annotations) {
      inst.id = ++next_instance;
      inst.image_id = id;
      delta.instances.push_back(inst);
    }
  }
  write_dataset(delta, out_root / "annotations_flipped.json");
  const AugmentationSummary rows[] = {AugmentationSummary::make(
      "flipping (" + target_label(rc) + ")", restricted ? count_images_with(ds, ids) : ds.images.size(),
      delta.images.size())};
  out << summary_table(rows);
  if (failures > 0) out << "failed images: " << failures << '\n';
  return !chosen.empty() && failures == chosen.size() ? kExitError : 0;
}

void add_common_options(CLI::App& app, RunConfig& rc) {
  app.add_option("--annotations", rc.annotations, "COCO annotation JSON file");
  app.add_option("--images", rc.images, "Directory holding the images named in the annotations");
  app.add_option("--out", rc.out, "Output directory");
  app.add_option("--slot-db", rc.slot_db, "Slot database sidecar (written by init, read otherwise)");
  app.add_option("--plan", rc.plan, "Existing plan JSON for augment");
  app.add_option("--category", rc.categories, "Target category name (repeatable)");
  app.add_option("--supercategory", rc.supercategory, "Target supercategory name");
  app.add_option("--ratio-tol", rc.ratio_tol, "Aspect-ratio tolerance, fraction in (0, 1)");
  app.add_option("--scale-tol", rc.scale_tol, "Area tolerance, fraction in (0, 1)");
  app.add_option("--category-mode", rc.category_mode, "same_category | same_supercategory | any")
      ->check(CLI::IsMember({"same_category", "same_supercategory", "any"}));
  app.add_option("--seed", rc.seed, "Seed for candidate selection");
  app.add_flag("--emit-per-slot", rc.emit_per_slot, "One generated image per substituted slot");
  app.add_option("--select-step", rc.select_step, "minify: write the dataset through this step");
  app.add_option("--jobs", rc.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--skip-bad-boxes", rc.skip_bad_boxes, "Drop invalid boxes with a warning");
  app.add_flag("--allow-same-image", rc.allow_same_image, "Allow donors from the slot's own image");
  app.add_flag("--no-ratio-filter", rc.no_ratio_filter, "Disable the aspect-ratio filter");
  app.add_flag("--no-scale-filter", rc.no_scale_filter, "Disable the scale filter");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Slot-based copy-paste augmentation for COCO object-detection datasets", "slotaug"};
  app.set_config("--config", "", "TOML-style config file; command-line flags take precedence");
  app.require_subcommand(1, 1);
  app.fallthrough();

  RunConfig rc;
  add_common_options(app, rc);

  using Command = int (*)(const RunConfig&, std::ostream&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Command>> commands = {
      {"init", "Build the slot database sidecar", cmd_init},
      {"stats", "Print per-category image/instance/slot tallies", cmd_stats},
      {"plan", "Build and write an augmentation plan", cmd_plan},
      {"augment", "Plan and execute slot substitution", cmd_augment},
      {"minify", "Greedy mini-dataset construction", cmd_minify},
      {"flip", "Horizontal-flip baseline", cmd_flip},
  };
  std::map<const CLI::App*, Command> dispatch;
  for (const auto& [name, help, fn] : commands) dispatch[app.add_subcommand(name, help)] = fn;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    for (const auto& [sub, fn] : dispatch) {
      if (sub->parsed()) return fn(rc, out, err);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << " (byte offset " << e.byte_offset() << ")\n";
    return kExitError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace slotaug
