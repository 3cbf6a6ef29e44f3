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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiger/geometry.hpp"

namespace tiger {

struct ObjectNode {
  int id = 0;
  std::string label;
  OrientedBox3 box;

  bool operator==(const ObjectNode&) const = default;
};

/// Calibrated multi-view world. View 0 defines the world frame and must be
/// the identity pose.
struct Scene {
  CameraIntrinsics intrinsics;
  std::vector<Pose> views;
  double floor_z = 0.0;
  std::vector<ObjectNode> objects;

  /// Throws InvalidArgument on any violated invariant.
  void validate() const;

  /// Throws UnknownView.
  const Pose& view(std::size_t id) const;
  const ObjectNode* find(int id) const;
  const ObjectNode* find_label(std::string_view label) const;

  /// Bounding rectangle of the projected corners, clipped to the image;
  /// nullopt when a corner is behind the camera or nothing is on screen.
  std::optional<Box2> projected_box(const ObjectNode& object,
                                    std::size_t view_id) const;

  bool operator==(const Scene&) const = default;
};

/// Scene document: {intrinsics:{fx,fy,cx,cy,width,height},
/// views:[{pose:[[4x4 row-major]]}], floor_z, objects:[{id,label,center,
/// half_extents,yaw}]}. Output is byte-deterministic.
std::string scene_to_json(const Scene& scene, int indent = -1);
/// Throws ConfigError on malformed documents and InvalidArgument when the
/// decoded scene violates its invariants.
Scene scene_from_json(std::string_view text);

Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

}  // namespace tiger
