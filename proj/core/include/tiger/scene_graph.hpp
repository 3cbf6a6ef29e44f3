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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tiger/geometry.hpp"
#include "tiger/scene.hpp"

namespace tiger {

enum class Relation { LeftOf, RightOf, InFrontOf, Behind, Above, Below, Between };

std::string_view to_string(Relation relation);

/// Minimum separation for the camera-centric relations, in meters.
inline constexpr double kRelationMinMargin = 0.02;

struct RelationEdge {
  int src = 0;
  int dst = 0;
  Relation relation = Relation::LeftOf;
  /// Second reference object of a Between(src, dst, third) triple.
  std::optional<int> third;
  std::size_t frame = 0;
  double center_distance = 0.0;
  double surface_distance = 0.0;
};

struct SceneGraph {
  std::size_t view = 0;
  std::vector<ObjectNode> nodes;
  std::vector<RelationEdge> edges;

  bool has(int src, Relation relation, int dst) const;
};

/// Evaluates every ordered pair under every binary relation (and every
/// object against every unordered pair for Between) and keeps the edges
/// that hold. Throws UnknownView, InvalidArgument for an empty scene.
SceneGraph build_scene_graph(const Scene& scene, std::size_t view);

/// Left/Right use camera-frame x, InFrontOf/Behind camera-frame z, each with
/// a dead band of max(mean of the two projected half-widths, 2 cm).
/// Above/Below compare vertical intervals along world up. Between is not a
/// binary relation and always yields false here.
bool spatial_relation(const OrientedBox3& a, const OrientedBox3& b,
                      const Pose& pose, Relation relation);
bool spatial_relation(const ObjectNode& a, const ObjectNode& b,
                      const Pose& pose, Relation relation);

/// a's center lies within the capsule around the c-b center segment whose
/// radius is the mean of a's horizontal half-extents.
bool between(const ObjectNode& a, const ObjectNode& c, const ObjectNode& b);

struct LabeledBox2 {
  std::string label;
  Box2 box;
};

struct AnnotationMatch {
  std::size_t predicted = 0;
  std::size_t reference = 0;
  double iou = 0.0;
};

/// Greedy one-to-one matching by descending IoU (ties by predicted, then
/// reference index); pairs below `threshold` are discarded.
std::vector<AnnotationMatch> match_annotations(
    std::span<const LabeledBox2> predicted, std::span<const Box2> reference,
    double threshold);

enum class Region { Below, Above, LeftOf, RightOf, Behind, InFront };

std::string_view to_string(Region region);
Relation relation_for(Region region);

/// Tiny box standing in for a point when evaluating relations.
OrientedBox3 point_box(const Vec3& p);

/// Seeded point in `region` relative to `anchor`, at least `clearance` from
/// the anchor's surface. Below needs room between `floor_z` and the anchor;
/// InFront needs room between the camera and the anchor. Throws
/// InfeasibleRegion otherwise.
Vec3 sample_region_point(const OrientedBox3& anchor, Region region,
                         const Pose& pose, double clearance,
                         std::uint64_t seed, double floor_z);

}  // namespace tiger
