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

#include "tiger/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tiger/error.hpp"

namespace tiger {

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy)) {
    throw Error(ErrorCode::InvalidArgument, "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "image size must be positive");
  }
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height)) {
    throw Error(ErrorCode::InvalidArgument, "principal point outside image");
  }
}

Pose::Pose(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "pose has non-finite entries");
  }
  const double ortho =
      (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > 1e-9 || std::abs(rotation.determinant() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "rotation is not a proper rotation");
  }
}

Pose Pose::from_matrix(const Mat4& m) {
  if (std::abs(m(3, 0)) > 1e-12 || std::abs(m(3, 1)) > 1e-12 ||
      std::abs(m(3, 2)) > 1e-12 || std::abs(m(3, 3) - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "last pose row must be (0,0,0,1)");
  }
  return Pose(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
}

Pose Pose::look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 forward = target - eye;
  if (forward.norm() < 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "eye and target coincide");
  }
  const Vec3 f = forward.normalized();
  const Vec3 side = f.cross(up);
  if (side.norm() < 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "view direction parallel to up");
  }
  const Vec3 right = side.normalized();
  const Vec3 down = f.cross(right);
  Mat3 r;
  r.row(0) = right.transpose();
  r.row(1) = down.transpose();
  r.row(2) = f.transpose();
  return Pose(r, -(r * eye));
}

Mat4 Pose::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

Pose compose(const Pose& a, const Pose& b) {
  return Pose(a.rotation() * b.rotation(),
              a.rotation() * b.translation() + a.translation());
}

Pose invert(const Pose& a) {
  const Mat3 rt = a.rotation().transpose();
  return Pose(rt, -(rt * a.translation()));
}

Vec3 transform(const Pose& a, const Vec3& p) {
  return a.rotation() * p + a.translation();
}

double normalize_angle(double angle) {
  const double two_pi = 2.0 * kPi;
  double wrapped = angle - two_pi * std::floor((angle + kPi) / two_pi);
  if (wrapped >= kPi) wrapped -= two_pi;
  if (wrapped < -kPi) wrapped += two_pi;
  return wrapped;
}

OrientedBox3 OrientedBox3::make(const Vec3& center, const Vec3& half_extents,
                                double yaw) {
  OrientedBox3 box;
  box.center = center;
  box.half_extents = half_extents;
  box.yaw = normalize_angle(yaw);
  if (!box.valid()) {
    throw Error(ErrorCode::InvalidArgument, "invalid oriented box");
  }
  return box;
}

bool OrientedBox3::valid() const {
  return center.allFinite() && half_extents.allFinite() &&
         (half_extents.array() > 0.0).all() && std::isfinite(yaw) &&
         yaw >= -kPi && yaw < kPi;
}

Mat3 OrientedBox3::rotation() const {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  Mat3 r;
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}

std::vector<Vec3> OrientedBox3::corners() const {
  std::vector<Vec3> out;
  out.reserve(8);
  for (int i = 0; i < 8; ++i) {
    const Vec3 local((i & 1) ? half_extents.x() : -half_extents.x(),
                     (i & 2) ? half_extents.y() : -half_extents.y(),
                     (i & 4) ? half_extents.z() : -half_extents.z());
    out.push_back(to_world(local));
  }
  return out;
}

Vec3 OrientedBox3::to_local(const Vec3& world) const {
  return rotation().transpose() * (world - center);
}

Vec3 OrientedBox3::to_world(const Vec3& local) const {
  return rotation() * local + center;
}

bool OrientedBox3::contains(const Vec3& world, double inflate) const {
  const Vec3 local = to_local(world);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(local[i]) > half_extents[i] + inflate) return false;
  }
  return true;
}

Vec3 OrientedBox3::support(const Vec3& direction) const {
  const Mat3 r = rotation();
  const Vec3 local_dir = r.transpose() * direction;
  Vec3 local;
  for (int i = 0; i < 3; ++i) {
    local[i] = local_dir[i] >= 0.0 ? half_extents[i] : -half_extents[i];
  }
  return r * local + center;
}

Vec3 unproject(const Vec2& pixel, double depth, const CameraIntrinsics& k) {
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw Error(ErrorCode::NonPositiveDepth, "depth must be positive");
  }
  if (!pixel.allFinite() || !k.contains_pixel(pixel)) {
    throw Error(ErrorCode::OutOfBounds, "pixel outside the image");
  }
  return Vec3((pixel.x() - k.cx) * depth / k.fx,
              (pixel.y() - k.cy) * depth / k.fy, depth);
}

Projection project_camera(const Vec3& camera_point, const CameraIntrinsics& k) {
  if (!(camera_point.z() > 0.0)) {
    throw Error(ErrorCode::BehindCamera, "point is behind the camera");
  }
  Projection out;
  out.depth = camera_point.z();
  out.pixel = Vec2(k.fx * camera_point.x() / camera_point.z() + k.cx,
                   k.fy * camera_point.y() / camera_point.z() + k.cy);
  out.normalized = k.normalize(out.pixel);
  return out;
}

Projection project(const Vec3& world_point, const CameraIntrinsics& k,
                   const Pose& pose) {
  return project_camera(transform(pose, world_point), k);
}

CameraMotion relative_camera_motion(const Pose& first, const Pose& second,
                                    const Vec3& pivot) {
  const Vec3 d1 = first.center() - pivot;
  const Vec3 d2 = second.center() - pivot;
  const Vec2 h1(d1.x(), d1.y());
  const Vec2 h2(d2.x(), d2.y());
  if (h1.norm() < 1e-12 || h2.norm() < 1e-12) {
    throw Error(ErrorCode::DegeneratePivot,
                "camera center lies on the vertical through the pivot");
  }
  CameraMotion motion;
  motion.angle = std::atan2(h1.x() * h2.y() - h1.y() * h2.x(), h1.dot(h2));
  motion.direction =
      motion.angle < 0.0 ? OrbitDirection::Left : OrbitDirection::Right;
  return motion;
}

double iou_2d(const Box2& a, const Box2& b) {
  const double iw = std::min(a.umax, b.umax) - std::max(a.umin, b.umin);
  const double ih = std::min(a.vmax, b.vmax) - std::max(a.vmin, b.vmin);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

Vec3 gravity_direction(const Pose& pose) {
  return (pose.rotation() * world_gravity()).normalized();
}

namespace {

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double canonical_yaw(double yaw) {
  const double quarter = kPi / 2.0;
  double out = yaw - quarter * std::floor((yaw + kPi / 4.0) / quarter);
  if (out >= kPi / 4.0) out -= quarter;
  if (out < -kPi / 4.0) out += quarter;
  return out;
}

double footprint_area(const std::vector<Vec2>& pts, double yaw) {
  const Vec2 ex(std::cos(yaw), std::sin(yaw));
  const Vec2 ey(-std::sin(yaw), std::cos(yaw));
  double smin = std::numeric_limits<double>::infinity(), smax = -smin;
  double tmin = smin, tmax = -smin;
  for (const auto& p : pts) {
    smin = std::min(smin, p.dot(ex));
    smax = std::max(smax, p.dot(ex));
    tmin = std::min(tmin, p.dot(ey));
    tmax = std::max(tmax, p.dot(ey));
  }
  return (smax - smin) * (tmax - tmin);
}

}  // namespace

ObbFit fit_obb(std::span<const Vec3> points, double min_extent) {
  if (points.size() < 3) {
    throw Error(ErrorCode::TooFewPoints, "need at least 3 points");
  }
  if (!(min_extent > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "min_extent must be positive");
  }
  double zmin = std::numeric_limits<double>::infinity();
  double zmax = -zmin;
  Vec2 mean = Vec2::Zero();
  for (const auto& p : points) {
    if (!p.allFinite()) {
      throw Error(ErrorCode::InvalidArgument, "non-finite point");
    }
    zmin = std::min(zmin, p.z());
    zmax = std::max(zmax, p.z());
    mean += Vec2(p.x(), p.y());
  }
  mean /= double(points.size());

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double dx = p.x() - mean.x();
    const double dy = p.y() - mean.y();
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double n = double(points.size());
  sxx /= n;
  syy /= n;
  sxy /= n;
  const double half_trace = 0.5 * (sxx + syy);
  const double radius = std::hypot(0.5 * (sxx - syy), sxy);
  const double lmax = half_trace + radius;
  const double lmin = half_trace - radius;

  ObbFit fit;
  double yaw = 0.0;
  if (!(lmax > 0.0) || lmin <= 1e-12 * lmax) {
    fit.degenerate_spread = true;
  } else if (radius <= 1e-9 * lmax) {
    // Isotropic spread leaves the principal axis undefined; pick the
    // hull-edge direction with the smallest footprint instead.
    std::vector<Vec2> ground;
    ground.reserve(points.size());
    for (const auto& p : points) ground.emplace_back(p.x(), p.y());
    const auto hull = convex_hull(std::move(ground));
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Vec2 e = hull[(i + 1) % hull.size()] - hull[i];
      const double candidate = canonical_yaw(std::atan2(e.y(), e.x()));
      const double area = footprint_area(hull, candidate);
      if (area < best * (1.0 - 1e-12)) {
        best = area;
        yaw = candidate;
      }
    }
  } else {
    yaw = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  }
  yaw = canonical_yaw(yaw);

  const Vec2 ex(std::cos(yaw), std::sin(yaw));
  const Vec2 ey(-std::sin(yaw), std::cos(yaw));
  double smin = std::numeric_limits<double>::infinity(), smax = -smin;
  double tmin = smin, tmax = -smin;
  for (const auto& p : points) {
    const Vec2 g(p.x(), p.y());
    smin = std::min(smin, g.dot(ex));
    smax = std::max(smax, g.dot(ex));
    tmin = std::min(tmin, g.dot(ey));
    tmax = std::max(tmax, g.dot(ey));
  }
  const double floor_half = 0.5 * min_extent;
  const Vec3 half(std::max(0.5 * (smax - smin), floor_half),
                  std::max(0.5 * (tmax - tmin), floor_half),
                  std::max(0.5 * (zmax - zmin), floor_half));
  const Vec2 mid = 0.5 * (smin + smax) * ex + 0.5 * (tmin + tmax) * ey;
  fit.box = OrientedBox3::make(Vec3(mid.x(), mid.y(), 0.5 * (zmin + zmax)),
                               half, yaw);
  return fit;
}

}  // namespace tiger
