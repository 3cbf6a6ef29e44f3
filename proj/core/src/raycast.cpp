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

#include "tiger/raycast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tiger/error.hpp"

namespace tiger {

std::optional<double> intersect_box(const OrientedBox3& box, const Vec3& origin,
                                    const Vec3& direction) {
  const Mat3 r = box.rotation();
  const Vec3 o = r.transpose() * (origin - box.center);
  const Vec3 d = r.transpose() * direction;
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const double h = box.half_extents[i];
    if (d[i] == 0.0) {
      if (std::abs(o[i]) > h) return std::nullopt;
      continue;
    }
    double t0 = (-h - o[i]) / d[i];
    double t1 = (h - o[i]) / d[i];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (!(t_near > 0.0)) return std::nullopt;
  return t_near;
}

std::optional<RayHit> cast_ray(const Scene& scene, std::size_t view,
                               const Vec2& pixel) {
  const Pose& pose = scene.view(view);
  const auto& k = scene.intrinsics;
  if (!k.contains_pixel(pixel)) {
    throw Error(ErrorCode::OutOfBounds, "pixel outside the image");
  }
  // Camera-frame direction with unit z, so the ray parameter is the depth.
  const Vec3 dir_cam((pixel.x() - k.cx) / k.fx, (pixel.y() - k.cy) / k.fy, 1.0);
  const Vec3 origin = pose.center();
  const Vec3 dir = pose.rotation().transpose() * dir_cam;

  std::optional<RayHit> best;
  for (const auto& o : scene.objects) {
    const auto t = intersect_box(o.box, origin, dir);
    if (!t) continue;
    if (!best || *t < best->depth ||
        (*t == best->depth && (!best->object || o.id < *best->object))) {
      best = RayHit{*t, o.id};
    }
  }
  if (dir.z() != 0.0) {
    const double t = (scene.floor_z - origin.z()) / dir.z();
    if (t > 0.0 && (!best || t < best->depth)) best = RayHit{t, std::nullopt};
  }
  return best;
}

DepthMap render_depth(const Scene& scene, std::size_t view) {
  const auto& k = scene.intrinsics;
  DepthMap map(k.width, k.height);
  for (int v = 0; v < k.height; ++v) {
    for (int u = 0; u < k.width; ++u) {
      const auto hit = cast_ray(scene, view, Vec2(u + 0.5, v + 0.5));
      if (hit) map.at(u, v) = hit->depth;
    }
  }
  return map;
}

std::vector<std::pair<int, int>> pixels_in_box(const CameraIntrinsics& k,
                                               const Box2& box) {
  std::vector<std::pair<int, int>> out;
  // Pixel i is inside when umin <= i + 0.5 <= umax. Clamp in floating point
  // first so absurd boxes cannot overflow the integer conversion.
  auto lo = [](double x, int n) {
    return int(std::clamp(std::ceil(x - 0.5), 0.0, double(n)));
  };
  auto hi = [](double x, int n) {
    return int(std::clamp(std::floor(x - 0.5), -1.0, double(n - 1)));
  };
  const int u0 = lo(box.umin, k.width), u1 = hi(box.umax, k.width);
  const int v0 = lo(box.vmin, k.height), v1 = hi(box.vmax, k.height);
  for (int v = v0; v <= v1; ++v) {
    for (int u = u0; u <= u1; ++u) out.emplace_back(u, v);
  }
  return out;
}

}  // namespace tiger
