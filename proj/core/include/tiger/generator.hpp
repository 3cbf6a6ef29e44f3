// Copyright 2026 The TIGeR Engine Authors
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

// Synthetic scenes, question templates and seeded dataset generation.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tiger/scene.hpp"
#include "tiger/tools.hpp"
#include "tiger/trajectory.hpp"

namespace tiger {

struct SceneParams {
  int min_objects = 2;
  int max_objects = 5;
  /// View 0 plus orbit views.
  int min_views = 3;
  int max_views = 4;
  std::vector<std::string> labels = {
      "chair", "table", "sofa",  "lamp",  "cabinet", "box",
      "plant", "stool", "shelf", "bin",   "monitor", "crate"};
  /// Objects stay within this horizontal distance (Chebyshev) of the pivot.
  double room_half_extent = 3.0;
  double orbit_radius_min = 2.5;
  double orbit_radius_max = 4.0;
  double camera_height_min = 1.2;
  double camera_height_max = 2.0;
  double orbit_step_min_deg = 10.0;
  double orbit_step_max_deg = 40.0;
  /// Minimum surface gap between objects, meters.
  double min_gap = 0.05;
  int max_attempts = 64;

  /// Throws ConfigError.
  void validate() const;
};

/// Fixed camera model of generated scenes.
CameraIntrinsics default_intrinsics();

/// Throws PlacementFailure when no valid layout is found within
/// `max_attempts` rejection rounds.
Scene generate_scene(const SceneParams& params, std::uint64_t seed);

enum class Family {
  ObjectSize,
  InterObjectDistance,
  SpatialLayoutMCQ,
  ObjectDepth,
  RelativeCameraPose,
  Point3DTarget,
  Pixel2DTarget,
  MetricOffsetPlacement,
};

inline constexpr std::array<Family, 8> kFamilies = {
    Family::ObjectSize,         Family::InterObjectDistance,
    Family::SpatialLayoutMCQ,   Family::ObjectDepth,
    Family::RelativeCameraPose, Family::Point3DTarget,
    Family::Pixel2DTarget,      Family::MetricOffsetPlacement};

std::string_view to_string(Family family);
std::optional<Family> parse_family(std::string_view text);

enum class ImageConfig { SingleView, MultiView };
std::string_view to_string(ImageConfig images);
std::optional<ImageConfig> parse_image_config(std::string_view text);

struct Template {
  Family family = Family::ObjectSize;
  ImageConfig images = ImageConfig::SingleView;
  AnswerFormat format = AnswerFormat::Scalar;

  /// Throws InvalidArgument for a family/format/image combination outside
  /// the compatibility table.
  void validate() const;
  bool operator==(const Template&) const = default;
};

bool compatible(Family family, AnswerFormat format);
bool compatible(Family family, ImageConfig images);
/// Default template of each family (RelativeCameraPose yields two).
std::vector<Template> default_templates();

struct Sample {
  std::string id;
  Scene scene;
  std::vector<std::size_t> views;
  std::string question;
  Trajectory trajectory;
  Value answer;
  AnswerFormat format = AnswerFormat::Scalar;
  Family family = Family::ObjectSize;
  std::uint64_t seed = 0;
};

/// Builds the family's tool plan, executes it against the scene in Oracle
/// mode and derives the answer from the last result. Throws
/// InsufficientScene when the scene lacks the objects or views needed.
Sample instantiate(const Template& tpl, const Scene& scene, std::uint64_t seed);

/// Answer implied by the final tool result of a family's plan.
Value derive_answer(Family family, AnswerFormat format, const Value& last_result);

/// Format validation, byte-identical replay and answer consistency.
bool self_check(const Sample& sample);

// ---------------------------------------------------------------------------
// Datasets

struct MixEntry {
  Template tpl;
  double weight = 0.0;
};

struct DatasetConfig {
  std::size_t count = 10;
  std::uint64_t seed = 0;
  SceneParams scene;
  std::vector<MixEntry> mix;
  /// Rejected attempts allowed per sample before generation fails.
  int max_retries = 32;

  /// Throws ConfigError: count >= 1, non-empty mix of valid templates with
  /// non-negative weights summing to 1 (within 1e-9).
  void validate() const;
};

/// Accepts a config or a manifest (manifest-only keys are ignored).
DatasetConfig dataset_config_from_json(std::string_view text);
std::string dataset_config_to_json(const DatasetConfig& cfg);

/// Largest-remainder allocation of `count` over the mix weights; ties go to
/// the earlier entry.
std::vector<std::size_t> allocate_counts(const std::vector<MixEntry>& mix,
                                         std::size_t count);

struct Dataset {
  std::vector<Sample> samples;
  /// Line-delimited records, each ending in '\n'.
  std::string jsonl;
  /// Config plus per-family counts and the dataset digest.
  std::string manifest;
  std::map<std::string, std::size_t> family_counts;
  std::string digest;  // SHA-256 hex of `jsonl`
};

/// Runs on `jobs` threads (0 = hardware concurrency); output bytes do not
/// depend on `jobs`. Throws GenerationFailure naming the sample index.
Dataset generate_dataset(const DatasetConfig& cfg, unsigned jobs = 1);

std::string sample_to_json(const Sample& s);
/// Throws ConfigError for malformed records and SyntaxError/OrderingError
/// for a malformed trajectory.
Sample sample_from_json(std::string_view line);

std::string sha256_hex(std::string_view data);

}  // namespace tiger
