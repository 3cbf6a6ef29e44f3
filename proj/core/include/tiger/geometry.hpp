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

// Pinhole camera and rigid-body geometry.
//
// Conventions used throughout the library:
//  * World frame is the camera frame of view 0. The world up axis is +Z and
//    gravity points along (0, 0, -1).
//  * Camera frame: +X right, +Y down, +Z forward. Pixel origin top-left.
//  * A Pose maps world-frame points into the camera frame (camera-from-world).
//  * Oriented boxes are gravity aligned: only a yaw about +Z.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <span>
#include <vector>

namespace tiger {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kPi = 3.14159265358979323846;

/// World up axis and gravity direction.
inline Vec3 world_up() { return Vec3(0.0, 0.0, 1.0); }
inline Vec3 world_gravity() { return Vec3(0.0, 0.0, -1.0); }

struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  /// Throws InvalidArgument unless fx, fy > 0 and the principal point lies
  /// inside the image.
  void validate() const;

  bool contains_pixel(const Vec2& pixel) const {
    return pixel.x() >= 0.0 && pixel.y() >= 0.0 && pixel.x() <= width &&
           pixel.y() <= height;
  }

  Vec2 normalize(const Vec2& pixel) const {
    return Vec2(pixel.x() / width, pixel.y() / height);
  }
  Vec2 denormalize(const Vec2& normalized) const {
    return Vec2(normalized.x() * width, normalized.y() * height);
  }

  bool operator==(const CameraIntrinsics&) const = default;
};

class Pose {
 public:
  Pose() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}
  /// Throws InvalidArgument when the rotation is not orthonormal with det +1
  /// (tolerance 1e-9) or any entry is non-finite.
  Pose(const Mat3& rotation, const Vec3& translation);

  static Pose identity() { return Pose(); }
  /// Rigid transform from a homogeneous 4x4 matrix; the last row must be
  /// (0, 0, 0, 1).
  static Pose from_matrix(const Mat4& m);
  /// Camera placed at `eye` looking at `target`, with `up` the world up axis.
  static Pose look_at(const Vec3& eye, const Vec3& target,
                      const Vec3& up = world_up());

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  Mat4 matrix() const;

  /// Camera center in world coordinates (-R^T t).
  Vec3 center() const { return -(rotation_.transpose() * translation_); }

  bool operator==(const Pose& other) const {
    return rotation_ == other.rotation_ && translation_ == other.translation_;
  }

 private:
  Mat3 rotation_;
  Vec3 translation_;
};

/// a ∘ b: applies b first, then a.
Pose compose(const Pose& a, const Pose& b);
Pose invert(const Pose& a);
Vec3 transform(const Pose& a, const Vec3& p);

struct Box2 {
  double umin = 0.0;
  double vmin = 0.0;
  double umax = 0.0;
  double vmax = 0.0;

  bool valid() const { return umin < umax && vmin < vmax; }
  double area() const { return (umax - umin) * (vmax - vmin); }
  bool operator==(const Box2&) const = default;
};

/// Gravity-aligned oriented box. Construct through make() to get a
/// normalized yaw in [-pi, pi).
struct OrientedBox3 {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Constant(0.5);
  double yaw = 0.0;

  static OrientedBox3 make(const Vec3& center, const Vec3& half_extents,
                           double yaw);

  bool valid() const;
  Mat3 rotation() const;
  /// Columns are the box axes in world coordinates.
  Mat3 axes() const { return rotation(); }
  std::vector<Vec3> corners() const;
  Vec3 to_local(const Vec3& world) const;
  Vec3 to_world(const Vec3& local) const;
  bool contains(const Vec3& world, double inflate = 0.0) const;
  double bottom() const { return center.z() - half_extents.z(); }
  double top() const { return center.z() + half_extents.z(); }
  /// Farthest point of the solid box along `direction`.
  Vec3 support(const Vec3& direction) const;

  bool operator==(const OrientedBox3& other) const {
    return center == other.center && half_extents == other.half_extents &&
           yaw == other.yaw;
  }
};

/// Wraps yaw into [-pi, pi).
double normalize_angle(double angle);

struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major, 0 = invalid

  DepthMap() = default;
  DepthMap(int w, int h) : width(w), height(h), values(std::size_t(w) * h, 0.0) {}
  double& at(int u, int v) { return values[std::size_t(v) * width + u]; }
  double at(int u, int v) const { return values[std::size_t(v) * width + u]; }
};

struct Projection {
  Vec2 pixel;
  Vec2 normalized;
  double depth = 0.0;  // camera-frame z
};

/// Pixel + metric depth to a camera-frame point.
Vec3 unproject(const Vec2& pixel, double depth, const CameraIntrinsics& k);

/// Camera-frame point to pixel. Throws BehindCamera when z <= 0.
Projection project_camera(const Vec3& camera_point, const CameraIntrinsics& k);

/// World point through `pose` onto the image plane.
Projection project(const Vec3& world_point, const CameraIntrinsics& k,
                   const Pose& pose);

enum class OrbitDirection { Left, Right };

struct CameraMotion {
  OrbitDirection direction = OrbitDirection::Right;
  /// Signed angle about world up from the first to the second
  /// center-to-pivot direction; positive is counter-clockwise seen from above.
  double angle = 0.0;
};

/// Left iff the camera orbits clockwise seen from above; an exact zero angle
/// is reported as Right.
CameraMotion relative_camera_motion(const Pose& first, const Pose& second,
                                    const Vec3& pivot);

/// Minimum distance between two solid boxes, 0 when they intersect.
double obb_distance(const OrientedBox3& a, const OrientedBox3& b);

double iou_2d(const Box2& a, const Box2& b);

/// World gravity expressed in the camera frame.
Vec3 gravity_direction(const Pose& pose);

struct ObbFit {
  OrientedBox3 box;
  /// Ground-plane projection was collinear (or a single point); yaw fell
  /// back to 0.
  bool degenerate_spread = false;
};

inline constexpr double kDefaultMinExtent = 0.01;

/// Gravity-aligned box around `points`: vertical extent from min/max height,
/// yaw from the principal axis of the ground-plane projection, yaw
/// canonicalized to [-pi/4, pi/4). Throws TooFewPoints for < 3 points.
ObbFit fit_obb(std::span<const Vec3> points,
               double min_extent = kDefaultMinExtent);

}  // namespace tiger
