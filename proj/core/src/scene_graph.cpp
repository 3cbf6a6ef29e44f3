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

#include "tiger/scene_graph.hpp"

#include <algorithm>
#include <cmath>

#include "tiger/error.hpp"
#include "tiger/random.hpp"

namespace tiger {

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::LeftOf: return "left_of";
    case Relation::RightOf: return "right_of";
    case Relation::InFrontOf: return "in_front_of";
    case Relation::Behind: return "behind";
    case Relation::Above: return "above";
    case Relation::Below: return "below";
    case Relation::Between: return "between";
  }
  return "unknown";
}

std::string_view to_string(Region region) {
  switch (region) {
    case Region::Below: return "below";
    case Region::Above: return "above";
    case Region::LeftOf: return "left_of";
    case Region::RightOf: return "right_of";
    case Region::Behind: return "behind";
    case Region::InFront: return "in_front";
  }
  return "unknown";
}

Relation relation_for(Region region) {
  switch (region) {
    case Region::Below: return Relation::Below;
    case Region::Above: return Relation::Above;
    case Region::LeftOf: return Relation::LeftOf;
    case Region::RightOf: return Relation::RightOf;
    case Region::Behind: return Relation::Behind;
    case Region::InFront: return Relation::InFrontOf;
  }
  return Relation::Below;
}

namespace {

// Half-extent of a box measured along a unit world direction.
double half_width_along(const OrientedBox3& box, const Vec3& direction) {
  const Mat3 axes = box.axes();
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    sum += std::abs(direction.dot(axes.col(i))) * box.half_extents[i];
  }
  return sum;
}

double margin(const OrientedBox3& a, const OrientedBox3& b,
              const Vec3& direction) {
  return std::max(
      0.5 * (half_width_along(a, direction) + half_width_along(b, direction)),
      kRelationMinMargin);
}

}  // namespace

bool spatial_relation(const OrientedBox3& a, const OrientedBox3& b,
                      const Pose& pose, Relation relation) {
  switch (relation) {
    case Relation::LeftOf:
    case Relation::RightOf: {
      const Vec3 axis = pose.rotation().row(0).transpose();
      const double xa = transform(pose, a.center).x();
      const double xb = transform(pose, b.center).x();
      const double m = margin(a, b, axis);
      return relation == Relation::LeftOf ? xb - xa > m : xa - xb > m;
    }
    case Relation::InFrontOf:
    case Relation::Behind: {
      const Vec3 axis = pose.rotation().row(2).transpose();
      const double za = transform(pose, a.center).z();
      const double zb = transform(pose, b.center).z();
      const double m = margin(a, b, axis);
      return relation == Relation::InFrontOf ? zb - za > m : za - zb > m;
    }
    case Relation::Above:
      return a.bottom() >= b.top();
    case Relation::Below:
      return a.top() <= b.bottom();
    case Relation::Between:
      return false;
  }
  return false;
}

bool spatial_relation(const ObjectNode& a, const ObjectNode& b,
                      const Pose& pose, Relation relation) {
  return spatial_relation(a.box, b.box, pose, relation);
}

bool between(const ObjectNode& a, const ObjectNode& c, const ObjectNode& b) {
  if (a.id == c.id || a.id == b.id || c.id == b.id) return false;
  const double radius = 0.5 * (a.box.half_extents.x() + a.box.half_extents.y());
  const Vec3 seg = b.box.center - c.box.center;
  const double len2 = seg.squaredNorm();
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp((a.box.center - c.box.center).dot(seg) / len2, 0.0, 1.0);
  }
  const Vec3 closest = c.box.center + t * seg;
  return (a.box.center - closest).norm() <= radius;
}

bool SceneGraph::has(int src, Relation relation, int dst) const {
  return std::any_of(edges.begin(), edges.end(), [&](const RelationEdge& e) {
    return e.src == src && e.dst == dst && e.relation == relation;
  });
}

SceneGraph build_scene_graph(const Scene& scene, std::size_t view) {
  const Pose& pose = scene.view(view);
  if (scene.objects.empty()) {
    throw Error(ErrorCode::InvalidArgument, "scene graph needs an object");
  }
  SceneGraph graph;
  graph.view = view;
  graph.nodes = scene.objects;

  static constexpr Relation kBinary[] = {Relation::LeftOf, Relation::RightOf,
                                         Relation::InFrontOf, Relation::Behind,
                                         Relation::Above, Relation::Below};
  const auto& objs = scene.objects;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    for (std::size_t j = 0; j < objs.size(); ++j) {
      if (i == j) continue;
      const double center_distance =
          (objs[i].box.center - objs[j].box.center).norm();
      double surface_distance = -1.0;
      for (Relation r : kBinary) {
        if (!spatial_relation(objs[i], objs[j], pose, r)) continue;
        if (surface_distance < 0.0) {
          surface_distance = obb_distance(objs[i].box, objs[j].box);
        }
        graph.edges.push_back(RelationEdge{objs[i].id, objs[j].id, r,
                                           std::nullopt, view, center_distance,
                                           surface_distance});
      }
    }
  }
  for (std::size_t a = 0; a < objs.size(); ++a) {
    for (std::size_t c = 0; c < objs.size(); ++c) {
      for (std::size_t b = c + 1; b < objs.size(); ++b) {
        if (a == c || a == b) continue;
        if (!between(objs[a], objs[c], objs[b])) continue;
        graph.edges.push_back(RelationEdge{
            objs[a].id, objs[c].id, Relation::Between, objs[b].id, view,
            (objs[a].box.center - objs[c].box.center).norm(),
            obb_distance(objs[a].box, objs[c].box)});
      }
    }
  }
  return graph;
}

std::vector<AnnotationMatch> match_annotations(
    std::span<const LabeledBox2> predicted, std::span<const Box2> reference,
    double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must be in (0, 1]");
  }
  std::vector<AnnotationMatch> candidates;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    for (std::size_t j = 0; j < reference.size(); ++j) {
      const double iou = iou_2d(predicted[i].box, reference[j]);
      if (iou >= threshold) candidates.push_back({i, j, iou});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const AnnotationMatch& x, const AnnotationMatch& y) {
                     return x.iou > y.iou;
                   });
  std::vector<bool> used_pred(predicted.size()), used_ref(reference.size());
  std::vector<AnnotationMatch> out;
  for (const auto& m : candidates) {
    if (used_pred[m.predicted] || used_ref[m.reference]) continue;
    used_pred[m.predicted] = used_ref[m.reference] = true;
    out.push_back(m);
  }
  return out;
}

OrientedBox3 point_box(const Vec3& p) {
  return OrientedBox3::make(p, Vec3::Constant(1e-9), 0.0);
}

Vec3 sample_region_point(const OrientedBox3& anchor, Region region,
                         const Pose& pose, double clearance,
                         std::uint64_t seed, double floor_z) {
  if (!(clearance >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "clearance must be non-negative");
  }
  Rng rng(seed);
  const Relation relation = relation_for(region);
  const Pose world_from_camera = invert(pose);
  const Vec3 anchor_cam = transform(pose, anchor.center);

  constexpr int kAttempts = 64;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Vec3 p;
    switch (region) {
      case Region::Below:
      case Region::Above: {
        const double lx = rng.uniform(-1.0, 1.0) * anchor.half_extents.x();
        const double ly = rng.uniform(-1.0, 1.0) * anchor.half_extents.y();
        double z = 0.0;
        if (region == Region::Below) {
          const double hi = anchor.bottom() - clearance;
          if (!(hi > floor_z)) {
            throw Error(ErrorCode::InfeasibleRegion,
                        "no room between the floor and the anchor");
          }
          z = floor_z + rng.uniform_open() * (hi - floor_z);
        } else {
          z = anchor.top() + clearance + 1e-6 + rng.uniform() * 0.5;
        }
        p = anchor.to_world(Vec3(lx, ly, 0.0));
        p.z() = z;
        break;
      }
      default: {
        const bool lateral =
            region == Region::LeftOf || region == Region::RightOf;
        const int axis = lateral ? 0 : 2;
        const Vec3 direction = pose.rotation().row(axis).transpose();
        const double half = half_width_along(anchor, direction);
        const double min_offset =
            std::max(half + clearance, 0.5 * half + kRelationMinMargin) + 1e-6;
        double span = 0.5;
        const double sign =
            (region == Region::RightOf || region == Region::Behind) ? 1.0
                                                                    : -1.0;
        if (region == Region::InFront) {
          // Stay at least 5 cm in front of the camera.
          const double room = anchor_cam.z() - min_offset - 0.05;
          if (!(room > 0.0)) {
            throw Error(ErrorCode::InfeasibleRegion,
                        "no room between the camera and the anchor");
          }
          span = std::min(span, room);
        }
        Vec3 cam = anchor_cam;
        cam[axis] += sign * (min_offset + rng.uniform() * span);
        p = transform(world_from_camera, cam);
        break;
      }
    }
    const OrientedBox3 pb = point_box(p);
    if (!spatial_relation(pb, anchor, pose, relation)) continue;
    if (obb_distance(pb, anchor) + 1e-8 < clearance) continue;
    if (region == Region::Below && !(p.z() > floor_z)) continue;
    return p;
  }
  throw Error(ErrorCode::InfeasibleRegion, "no sample satisfied the region");
}

}  // namespace tiger
