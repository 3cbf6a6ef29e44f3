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

// GJK distance between two boxes. The Minkowski difference A - B is only
// touched through its support mapping; the simplex sub-problem is solved by
// exhaustive feature search, which stays well defined on degenerate
// (collinear / coplanar) simplices.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "tiger/geometry.hpp"

namespace tiger {
namespace {

struct Simplex {
  std::array<Vec3, 4> pts;
  int size = 0;
};

Vec3 closest_on_segment(const Vec3& a, const Vec3& b, double* t_out) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(-a.dot(ab) / len2, 0.0, 1.0);
  *t_out = t;
  return a + t * ab;
}

// Closest point of triangle abc to the origin. `keep` receives the indices
// (into {a, b, c}) of the smallest feature containing it.
Vec3 closest_on_triangle(const Vec3& a, const Vec3& b, const Vec3& c,
                         std::array<int, 3>& keep, int& keep_n) {
  const std::array<Vec3, 3> v{a, b, c};
  double best = std::numeric_limits<double>::infinity();
  Vec3 best_pt = a;

  for (int i = 0; i < 3; ++i) {
    const double d = v[i].squaredNorm();
    if (d < best) {
      best = d;
      best_pt = v[i];
      keep = {i, 0, 0};
      keep_n = 1;
    }
  }
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    double t = 0.0;
    const Vec3 p = closest_on_segment(v[i], v[j], &t);
    if (t > 0.0 && t < 1.0) {
      const double d = p.squaredNorm();
      if (d < best) {
        best = d;
        best_pt = p;
        keep = {i, j, 0};
        keep_n = 2;
      }
    }
  }
  const Vec3 n = (b - a).cross(c - a);
  const double n2 = n.squaredNorm();
  // Relative cutoff: a sliver triangle's plane is pure roundoff.
  const double l2 = std::max({(b - a).squaredNorm(), (c - a).squaredNorm(),
                              (c - b).squaredNorm()});
  if (n2 > 1e-20 * l2 * l2) {
    const Vec3 p = (a.dot(n) / n2) * n;  // origin projected on the plane
    const double w0 = (b - p).cross(c - p).dot(n);
    const double w1 = (c - p).cross(a - p).dot(n);
    const double w2 = (a - p).cross(b - p).dot(n);
    if (w0 > 0.0 && w1 > 0.0 && w2 > 0.0) {
      const double d = p.squaredNorm();
      if (d < best) {
        best_pt = p;
        keep = {0, 1, 2};
        keep_n = 3;
      }
    }
  }
  return best_pt;
}

// Returns the closest point of the simplex to the origin and shrinks the
// simplex to the supporting feature. Sets `contains_origin` when the origin
// is inside a full-dimensional tetrahedron.
Vec3 reduce(Simplex& s, bool& contains_origin) {
  contains_origin = false;
  switch (s.size) {
    case 1:
      return s.pts[0];
    case 2: {
      double t = 0.0;
      const Vec3 p = closest_on_segment(s.pts[0], s.pts[1], &t);
      if (t <= 0.0) {
        s.size = 1;
      } else if (t >= 1.0) {
        s.pts[0] = s.pts[1];
        s.size = 1;
      }
      return p;
    }
    case 3: {
      std::array<int, 3> keep{};
      int keep_n = 0;
      const Vec3 p =
          closest_on_triangle(s.pts[0], s.pts[1], s.pts[2], keep, keep_n);
      const Simplex old = s;
      for (int i = 0; i < keep_n; ++i) s.pts[i] = old.pts[keep[i]];
      s.size = keep_n;
      return p;
    }
    default: {
      const auto& p = s.pts;
      const double vol = (p[1] - p[0]).cross(p[2] - p[0]).dot(p[3] - p[0]);
      static constexpr std::array<std::array<int, 4>, 4> faces{
          {{0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 3, 1}, {1, 2, 3, 0}}};
      double l2 = 0.0;
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) l2 = std::max(l2, (p[i] - p[j]).squaredNorm());
      }
      if (std::abs(vol) > 1e-10 * l2 * std::sqrt(l2)) {
        bool inside = true;
        for (const auto& f : faces) {
          const Vec3 n = (p[f[1]] - p[f[0]]).cross(p[f[2]] - p[f[0]]);
          const double side_origin = n.dot(-p[f[0]]);
          const double side_opposite = n.dot(p[f[3]] - p[f[0]]);
          if (side_origin * side_opposite < 0.0) {
            inside = false;
            break;
          }
        }
        if (inside) {
          contains_origin = true;
          return Vec3::Zero();
        }
      }
      double best = std::numeric_limits<double>::infinity();
      Vec3 best_pt = p[0];
      Simplex best_s;
      for (const auto& f : faces) {
        std::array<int, 3> keep{};
        int keep_n = 0;
        const Vec3 q =
            closest_on_triangle(p[f[0]], p[f[1]], p[f[2]], keep, keep_n);
        const double d = q.squaredNorm();
        if (d < best) {
          best = d;
          best_pt = q;
          best_s.size = keep_n;
          for (int i = 0; i < keep_n; ++i) best_s.pts[i] = p[f[keep[i]]];
        }
      }
      s = best_s;
      return best_pt;
    }
  }
}

Vec3 minkowski_support(const OrientedBox3& a, const OrientedBox3& b,
                       const Vec3& d) {
  return a.support(d) - b.support(-d);
}

}  // namespace

double obb_distance(const OrientedBox3& a, const OrientedBox3& b) {
  Vec3 dir = a.center - b.center;
  if (dir.squaredNorm() == 0.0) dir = Vec3::UnitX();

  Simplex simplex;
  simplex.pts[0] = minkowski_support(a, b, -dir);
  simplex.size = 1;
  Vec3 v = simplex.pts[0];
  double vv = v.squaredNorm();

  constexpr int kMaxIterations = 128;
  for (int iter = 0; iter < kMaxIterations && vv > 0.0; ++iter) {
    const Vec3 w = minkowski_support(a, b, -v);
    // No support point is meaningfully closer: v is the closest point.
    if (vv - v.dot(w) <= 1e-14 * vv) break;
    bool duplicate = false;
    for (int i = 0; i < simplex.size; ++i) {
      if (simplex.pts[i] == w) duplicate = true;
    }
    if (duplicate) break;
    simplex.pts[simplex.size++] = w;

    bool contains_origin = false;
    const Vec3 next = reduce(simplex, contains_origin);
    if (contains_origin) return 0.0;
    const double next_vv = next.squaredNorm();
    if (next_vv >= vv) break;
    v = next;
    vv = next_vv;
    if (vv <= 1e-24) return 0.0;
  }
  return std::sqrt(vv);
}

}  // namespace tiger
