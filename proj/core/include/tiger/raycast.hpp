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

// Analytic depth oracle: nearest hit of a pixel ray against every object box
// and the floor plane.

#include <cstddef>
#include <optional>
#include <vector>

#include "tiger/geometry.hpp"
#include "tiger/scene.hpp"

namespace tiger {

struct RayHit {
  /// Camera-frame z of the hit point (metric depth), > 0.
  double depth = 0.0;
  /// Object id, or nullopt for the floor.
  std::optional<int> object;
};

/// Entry parameter of the ray origin + t * direction into the solid box, or
/// nullopt when the ray misses or starts inside it.
std::optional<double> intersect_box(const OrientedBox3& box, const Vec3& origin,
                                    const Vec3& direction);

/// Nearest hit through `pixel` (continuous pixel coordinates) in `view`.
/// Objects win exact ties against the floor, smaller ids win ties among
/// objects. Throws UnknownView and OutOfBounds.
std::optional<RayHit> cast_ray(const Scene& scene, std::size_t view,
                               const Vec2& pixel);

/// One ray per pixel center (i + 0.5, j + 0.5); 0 marks pixels with no hit.
DepthMap render_depth(const Scene& scene, std::size_t view);

/// Integer pixels (u, v) whose centers lie inside `box`, clipped to the image,
/// in row-major order.
std::vector<std::pair<int, int>> pixels_in_box(const CameraIntrinsics& k,
                                               const Box2& box);

}  // namespace tiger
