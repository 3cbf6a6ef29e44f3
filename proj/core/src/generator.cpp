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

#include "tiger/generator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

#include "tiger/error.hpp"
#include "tiger/random.hpp"
#include "tiger/raycast.hpp"
#include "tiger/reward.hpp"
#include "tiger/scene_graph.hpp"

namespace tiger {

namespace {

constexpr double kDeg = kPi / 180.0;
constexpr double kCameraClearance = 0.3;

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::ConfigError, msg);
}

[[noreturn]] void insufficient(const std::string& msg) {
  throw Error(ErrorCode::InsufficientScene, msg);
}

double half_width_along(const OrientedBox3& box, const Vec3& direction) {
  const Mat3 axes = box.axes();
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    sum += std::abs(direction.dot(axes.col(i))) * box.half_extents[i];
  }
  return sum;
}

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.below(i)]);
  }
}

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng) {
  return items[rng.below(items.size())];
}

// The object's center projects inside the image and its pixel ray hits it.
bool visible_in(const Scene& scene, const ObjectNode& object, std::size_t view) {
  const Vec3 cam = transform(scene.view(view), object.box.center);
  if (cam.z() <= 1e-6) return false;
  const Vec2 px = project_camera(cam, scene.intrinsics).pixel;
  if (!scene.intrinsics.contains_pixel(px)) return false;
  const auto hit = cast_ray(scene, view, px);
  return hit && hit->object == object.id;
}

std::optional<Scene> try_layout(const SceneParams& p, Rng& rng) {
  Scene s;
  s.intrinsics = default_intrinsics();
  s.floor_z = 0.0;
  s.views.push_back(Pose::identity());
  const int nviews = rng.range(p.min_views, p.max_views);
  const int nobjects = rng.range(p.min_objects, p.max_objects);
  const auto& k = s.intrinsics;

  const Vec3 pivot(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), s.floor_z);
  const double radius = rng.uniform(p.orbit_radius_min, p.orbit_radius_max);
  const double height = rng.uniform(p.camera_height_min, p.camera_height_max);
  double theta = rng.uniform(-kPi, kPi);
  for (int i = 1; i < nviews; ++i) {
    if (i > 1) {
      const double step = rng.uniform(p.orbit_step_min_deg, p.orbit_step_max_deg) * kDeg;
      theta += rng.coin() ? step : -step;
    }
    const Vec3 eye = pivot + Vec3(radius * std::cos(theta), radius * std::sin(theta), height);
    s.views.push_back(Pose::look_at(eye, pivot));
  }

  std::vector<std::string> labels = p.labels;
  shuffle(labels, rng);

  for (int j = 0; j < nobjects; ++j) {
    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
      const std::size_t host = nviews > 1 ? std::size_t(rng.range(1, nviews - 1)) : 0;
      const Vec3 half(rng.uniform(0.1, 0.45), rng.uniform(0.1, 0.45), rng.uniform(0.1, 0.6));
      const double yaw = rng.uniform(-kPi, kPi);
      const Vec2 px(rng.uniform(0.15, 0.85) * k.width, rng.uniform(0.3, 0.95) * k.height);
      Vec3 center;
      if (host == 0) {
        // Only view 0 exists: it looks straight up, so objects float above.
        center = unproject(px, rng.uniform(2.0, 5.0), k);
        if (center.z() - half.z() < s.floor_z + 0.05) continue;
      } else {
        const Pose& pose = s.views[host];
        const Vec3 dir = pose.rotation().transpose() *
                         Vec3((px.x() - k.cx) / k.fx, (px.y() - k.cy) / k.fy, 1.0);
        if (dir.z() > -1e-6) continue;
        const Vec3 eye = pose.center();
        const double t = (s.floor_z - eye.z()) / dir.z();
        Vec3 foot = eye + t * dir;
        foot.z() = s.floor_z;
        if (std::abs(foot.x() - pivot.x()) > p.room_half_extent ||
            std::abs(foot.y() - pivot.y()) > p.room_half_extent) {
          continue;
        }
        center = foot + Vec3(0.0, 0.0, half.z());
      }
      ObjectNode node{j + 1, labels[std::size_t(j)], OrientedBox3::make(center, half, yaw)};
      bool ok = true;
      for (const auto& other : s.objects) {
        if (obb_distance(other.box, node.box) < p.min_gap) {
          ok = false;
          break;
        }
      }
      for (const auto& pose : s.views) {
        if (!ok) break;
        if (obb_distance(point_box(pose.center()), node.box) < kCameraClearance) ok = false;
      }
      if (!ok) continue;
      s.objects.push_back(node);
      if (visible_in(s, s.objects.back(), host)) {
        placed = true;
      } else {
        s.objects.pop_back();
      }
    }
    if (!placed) return std::nullopt;
  }
  // Later objects may hide earlier ones.
  for (const auto& o : s.objects) {
    bool seen = false;
    for (std::size_t v = 0; v < s.views.size() && !seen; ++v) seen = visible_in(s, o, v);
    if (!seen) return std::nullopt;
  }
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Plans

struct Target {
  const ObjectNode* object = nullptr;
  std::size_t view = 0;
  Box2 box;
};

class PlanBuilder {
 public:
  PlanBuilder(const Scene& scene, Rng& rng) : scene_(scene), rng_(rng), ctx_(scene) {}

  void think(std::string text) { t_.steps.push_back(Thought{std::move(text)}); }

  Value call(std::string name, std::vector<Argument> args) {
    ToolCall c{std::move(name), std::move(args)};
    Value v = execute_tool(ctx_, c);
    t_.steps.push_back(std::move(c));
    t_.steps.push_back(ToolResult{v});
    return v;
  }

  Value box3(const Target& target) {
    return call("box_2d_to_box_3d", {view_arg(target.view), {"box", target.box}});
  }

  Value extrinsics(std::size_t view) {
    return call("camera_extrinsics", {view_arg(view)});
  }

  Value code(const std::string& program, std::vector<std::string> uses) {
    List labels;
    for (auto& u : uses) labels.items.push_back(Text{std::move(u)});
    return call("code_executor", {{"program", Text{program}}, {"uses", labels}});
  }

  std::string last_label() const { return "r" + std::to_string(ctx_.calls); }

  static Argument view_arg(std::size_t view) {
    return {"view", Scalar{double(view), {}}};
  }

  /// A (object, view) pair whose projected box resolves to the object.
  std::optional<Target> target(const std::vector<std::size_t>& views,
                               const std::vector<int>& exclude = {}) {
    std::vector<std::pair<const ObjectNode*, std::size_t>> pairs;
    for (const auto& o : scene_.objects) {
      if (std::find(exclude.begin(), exclude.end(), o.id) != exclude.end()) continue;
      for (std::size_t v : views) pairs.emplace_back(&o, v);
    }
    shuffle(pairs, rng_);
    for (const auto& [o, v] : pairs) {
      if (auto t = resolve(*o, v)) return t;
    }
    return std::nullopt;
  }

  std::optional<Target> resolve(const ObjectNode& o, std::size_t view) {
    const auto box = scene_.projected_box(o, view);
    if (!box || box->area() < 100.0) return std::nullopt;
    try {
      if (majority_object(scene_, view, *box) != o.id) return std::nullopt;
    } catch (const Error&) {
      return std::nullopt;
    }
    return Target{&o, view, *box};
  }

  Trajectory finish(Value answer, AnswerFormat format) {
    t_.steps.push_back(Answer{std::move(answer), format});
    return std::move(t_);
  }

  const Value& last_result() const {
    return std::get<ToolResult>(t_.steps.back()).value;
  }

 private:
  const Scene& scene_;
  Rng& rng_;
  ExecutionContext ctx_;
  Trajectory t_;
};

std::vector<std::size_t> all_views(const Scene& s) {
  std::vector<std::size_t> out(s.views.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

std::string num(double x) { return format_number(x); }

std::string vec_literal(const Vec3& v) {
  return "vec(" + num(v.x()) + ", " + num(v.y()) + ", " + num(v.z()) + ")";
}

std::string fill(std::string text, const std::vector<std::pair<std::string, std::string>>& subs) {
  for (const auto& [key, value] : subs) {
    const std::string token = "{" + key + "}";
    for (std::size_t pos = text.find(token); pos != std::string::npos;
         pos = text.find(token, pos + value.size())) {
      text.replace(pos, token.size(), value);
    }
  }
  return text;
}

std::string phrase(Rng& rng, const std::vector<std::string>& bank,
                   const std::vector<std::pair<std::string, std::string>>& subs) {
  return fill(pick(bank, rng), subs);
}

// Closest point between the two optical axes.
std::optional<Vec3> optical_pivot(const Pose& a, const Pose& b) {
  const Vec3 ca = a.center(), cb = b.center();
  const Vec3 fa = a.rotation().row(2).transpose(), fb = b.rotation().row(2).transpose();
  const double aa = fa.dot(fa), bb = fb.dot(fb), ab = fa.dot(fb);
  const double denom = aa * bb - ab * ab;
  if (denom < 1e-9) return std::nullopt;
  const Vec3 w = ca - cb;
  const double s = (ab * fb.dot(w) - bb * fa.dot(w)) / denom;
  const double t = (aa * fb.dot(w) - ab * fa.dot(w)) / denom;
  return 0.5 * ((ca + s * fa) + (cb + t * fb));
}

struct Built {
  std::string question;
  Trajectory trajectory;
  std::vector<std::size_t> views;
};

Built object_size(PlanBuilder& b, const Scene& s, Rng& rng) {
  const auto target = b.target(all_views(s));
  if (!target) insufficient("no resolvable object");
  const std::string label = target->object->label;
  const std::string view = std::to_string(target->view);
  static const std::vector<std::string> kHeight = {
      "In view {v}, how tall is the {a}?",
      "What is the height of the {a} seen in view {v}, in meters?"};
  static const std::vector<std::string> kLong = {
      "In view {v}, how long is the longest horizontal side of the {a}?",
      "What is the length of the {a} in view {v} along its longer horizontal side?"};
  static const std::vector<std::string> kShort = {
      "In view {v}, how wide is the {a} along its shorter horizontal side?",
      "What is the width of the {a} in view {v}, measured across its narrower side?"};
  const auto which = rng.below(3);
  const auto& bank = which == 0 ? kHeight : which == 1 ? kLong : kShort;
  const std::string question = phrase(rng, bank, {{"a", label}, {"v", view}});
  b.think("Lift the " + label + " to 3D and measure its extent.");
  b.box3(*target);
  const std::string r = b.last_label();
  std::string program;
  if (which == 0) {
    program = "2 * at(half(" + r + "), 2)";
  } else {
    program = "let h = half(" + r + ");\n2 * " + std::string(which == 1 ? "max" : "min") +
              "(at(h, 0), at(h, 1))";
  }
  b.code(program, {r});
  return {question, {}, {target->view}};
}

Built inter_object_distance(PlanBuilder& b, const Scene& s, Rng& rng, ImageConfig images) {
  if (s.objects.size() < 2) insufficient("needs two objects");
  const auto views = all_views(s);
  std::optional<Target> first, second;
  std::vector<int> tried;
  for (std::size_t guard = 0; guard < s.objects.size() && !second; ++guard) {
    first = b.target(views, tried);
    if (!first) break;
    tried.push_back(first->object->id);
    std::vector<std::size_t> other_views;
    for (std::size_t v : views) {
      if ((images == ImageConfig::SingleView) == (v == first->view)) other_views.push_back(v);
    }
    second = b.target(other_views, {first->object->id});
  }
  if (!first || !second) insufficient("no resolvable object pair");
  const std::string a = first->object->label, c = second->object->label;
  std::string question;
  if (images == ImageConfig::SingleView) {
    static const std::vector<std::string> kBank = {
        "In view {v}, what is the minimum distance between the {a} and the {b}?",
        "How far apart are the {a} and the {b} in view {v} at their closest points?"};
    question = phrase(rng, kBank, {{"a", a}, {"b", c}, {"v", std::to_string(first->view)}});
  } else {
    static const std::vector<std::string> kBank = {
        "The {a} is visible in view {v} and the {b} in view {w}. What is the minimum "
        "distance between them?",
        "Using views {v} and {w}, how close do the {a} and the {b} come to each other?"};
    question = phrase(rng, kBank, {{"a", a}, {"b", c}, {"v", std::to_string(first->view)},
                                   {"w", std::to_string(second->view)}});
  }
  b.think("Lift both objects to 3D boxes, then compute the box-to-box distance.");
  b.box3(*first);
  const std::string r1 = b.last_label();
  b.box3(*second);
  const std::string r2 = b.last_label();
  b.code("obb_dist(" + r1 + ", " + r2 + ")", {r1, r2});
  std::vector<std::size_t> used = {first->view};
  if (second->view != first->view) used.push_back(second->view);
  std::sort(used.begin(), used.end());
  return {question, {}, used};
}

Built spatial_layout(PlanBuilder& b, const Scene& s, Rng& rng) {
  if (s.objects.size() < 2) insufficient("needs two objects");
  struct Pair {
    const ObjectNode* a;
    const ObjectNode* c;
    std::size_t view;
    bool lateral;
  };
  std::vector<Pair> pairs;
  for (std::size_t v = 0; v < s.views.size(); ++v) {
    for (const auto& a : s.objects) {
      for (const auto& c : s.objects) {
        if (a.id >= c.id) continue;
        const Pose& pose = s.views[v];
        if (spatial_relation(a, c, pose, Relation::LeftOf) ||
            spatial_relation(a, c, pose, Relation::RightOf)) {
          pairs.push_back({&a, &c, v, true});
        }
        if (spatial_relation(a, c, pose, Relation::InFrontOf) ||
            spatial_relation(a, c, pose, Relation::Behind)) {
          pairs.push_back({&a, &c, v, false});
        }
      }
    }
  }
  shuffle(pairs, rng);
  for (auto pair : pairs) {
    if (rng.coin()) std::swap(pair.a, pair.c);
    auto ta = b.resolve(*pair.a, pair.view);
    auto tc = b.resolve(*pair.c, pair.view);
    if (!ta || !tc) continue;
    const std::string v = std::to_string(pair.view);
    std::string question;
    std::string program;
    if (pair.lateral) {
      static const std::vector<std::string> kBank = {
          "In view {v}, is the {a} to the left or to the right of the {b}? A. left B. right",
          "From the camera of view {v}, where is the {a} relative to the {b}? A. to the left "
          "B. to the right"};
      question = phrase(rng, kBank, {{"a", pair.a->label}, {"b", pair.c->label}, {"v", v}});
    } else {
      static const std::vector<std::string> kBank = {
          "In view {v}, is the {a} closer to the camera than the {b}? A. closer B. farther",
          "Seen from view {v}, which is true? A. the {a} is in front of the {b} B. the {a} "
          "is behind the {b}"};
      question = phrase(rng, kBank, {{"a", pair.a->label}, {"b", pair.c->label}, {"v", v}});
    }
    b.think("Get both 3D boxes and the camera pose, then compare camera-frame centers.");
    b.box3(*ta);
    const std::string r1 = b.last_label();
    b.box3(*tc);
    const std::string r2 = b.last_label();
    b.extrinsics(pair.view);
    const std::string r3 = b.last_label();
    const std::string axis = pair.lateral ? "0" : "2";
    program = "let p = xform(" + r3 + ", center(" + r1 + "));\nlet q = xform(" + r3 +
              ", center(" + r2 + "));\nif at(p, " + axis + ") < at(q, " + axis +
              ") then 0 else 1";
    b.code(program, {r1, r2, r3});
    return {question, {}, {pair.view}};
  }
  insufficient("no unambiguous object pair");
}

Built object_depth(PlanBuilder& b, const Scene& s, Rng& rng) {
  std::vector<std::pair<const ObjectNode*, std::size_t>> pairs;
  for (const auto& o : s.objects) {
    for (std::size_t v = 0; v < s.views.size(); ++v) pairs.emplace_back(&o, v);
  }
  shuffle(pairs, rng);
  const auto& k = s.intrinsics;
  for (const auto& [o, v] : pairs) {
    const Vec3 cam = transform(s.views[v], o->box.center);
    if (cam.z() <= 1e-6) continue;
    const Projection p = project_camera(cam, k);
    if (!k.contains_pixel(p.pixel)) continue;
    const NormPoint2 point{p.normalized.x(), p.normalized.y()};
    const auto hit = cast_ray(s, v, k.denormalize(Vec2(point.x, point.y)));
    if (!hit || hit->object != o->id) continue;
    static const std::vector<std::string> kBank = {
        "In view {v}, how far from the camera is the {a}, measured at its center?",
        "What is the depth of the {a} at its center point in view {v}?"};
    const std::string question =
        phrase(rng, kBank, {{"a", o->label}, {"v", std::to_string(v)}});
    b.think("Query the depth sensor at the center of the " + o->label + ".");
    b.call("depth_sensor", {PlanBuilder::view_arg(v), {"point", point}});
    return {question, {}, {v}};
  }
  insufficient("no object center is directly visible");
}

Built relative_camera_pose(PlanBuilder& b, const Scene& s, Rng& rng, AnswerFormat format) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 1; a < s.views.size(); ++a) {
    for (std::size_t c = a + 1; c < s.views.size(); ++c) pairs.emplace_back(a, c);
  }
  shuffle(pairs, rng);
  for (const auto& [a, c] : pairs) {
    const std::string va = std::to_string(a), vc = std::to_string(c);
    if (format == AnswerFormat::Pose) {
      static const std::vector<std::string> kBank = {
          "What is the pose of view {w} relative to view {v}, as a 4x4 matrix?",
          "Give the rigid transform that maps camera-{v} coordinates to camera-{w} "
          "coordinates."};
      const std::string question = phrase(rng, kBank, {{"v", va}, {"w", vc}});
      b.think("Read both extrinsics and chain them.");
      b.extrinsics(a);
      const std::string r1 = b.last_label();
      b.extrinsics(c);
      const std::string r2 = b.last_label();
      b.code("matmul(" + r2 + ", inv_pose(" + r1 + "))", {r1, r2});
      return {question, {}, {a, c}};
    }
    const auto pivot = optical_pivot(s.views[a], s.views[c]);
    if (!pivot) continue;
    double angle = 0.0;
    try {
      angle = relative_camera_motion(s.views[a], s.views[c], *pivot).angle;
    } catch (const Error&) {
      continue;
    }
    if (std::abs(angle) < 1.0 * kDeg) continue;
    static const std::vector<std::string> kBank = {
        "The camera moves from view {v} to view {w} while circling the scene. Is it moving "
        "clockwise (left) or counter-clockwise (right)? A. left B. right",
        "Between view {v} and view {w}, is the camera moving left or right around the "
        "scene? A. left B. right"};
    const std::string question = phrase(rng, kBank, {{"v", va}, {"w", vc}});
    b.think("Compare the two camera centers around the point both views look at.");
    b.extrinsics(a);
    const std::string r1 = b.last_label();
    b.extrinsics(c);
    const std::string r2 = b.last_label();
    b.code("if orbit_angle(" + r1 + ", " + r2 + ", " + vec_literal(*pivot) +
               ") >= 0 then 1 else 0",
           {r1, r2});
    return {question, {}, {a, c}};
  }
  insufficient("needs two orbit views with a clear motion");
}

Built point3d_target(PlanBuilder& b, const Scene& s, Rng& rng) {
  const auto target = b.target(all_views(s));
  if (!target) insufficient("no resolvable object");
  const std::string label = target->object->label;
  const std::string v = std::to_string(target->view);
  static const double kOffsets[] = {0.05, 0.1, 0.2};
  const double d = kOffsets[rng.below(3)];
  const bool center_only = rng.below(4) == 0;
  std::string question;
  b.think("Lift the " + label + " to 3D and offset from its box.");
  b.box3(*target);
  const std::string r = b.last_label();
  if (center_only) {
    static const std::vector<std::string> kBank = {
        "In view {v}, what are the world coordinates of the center of the {a}?",
        "Give the 3D center of the {a} seen in view {v}."};
    question = phrase(rng, kBank, {{"a", label}, {"v", v}});
    b.code("center(" + r + ")", {r});
  } else {
    static const std::vector<std::string> kBank = {
        "In view {v}, give the world coordinates of a point {d} m above the top center of "
        "the {a}.",
        "Where is the point {d} m directly above the {a} in view {v}? Answer in world "
        "coordinates."};
    question = phrase(rng, kBank, {{"a", label}, {"v", v}, {"d", num(d)}});
    b.code("center(" + r + ") + vec(0, 0, at(half(" + r + "), 2) + " + num(d) + ")", {r});
  }
  return {question, {}, {target->view}};
}

Built pixel2d_target(PlanBuilder& b, const Scene& s, Rng& rng) {
  const auto target = b.target(all_views(s));
  if (!target) insufficient("no resolvable object");
  const ObjectNode& o = *target->object;
  const std::size_t view = target->view;
  const Pose& pose = s.views[view];

  std::vector<Region> regions = {Region::Above, Region::LeftOf, Region::RightOf,
                                 Region::InFront, Region::Behind};
  const double gap = o.box.bottom() - s.floor_z;
  if (gap > 0.02) regions.push_back(Region::Below);
  shuffle(regions, rng);

  for (Region region : regions) {
    const Vec3 cam_center = transform(pose, o.box.center);
    std::string body;
    if (region == Region::Above || region == Region::Below) {
      const double extra = region == Region::Above ? 0.1 : std::min(0.1, 0.5 * gap);
      body = "c " + std::string(region == Region::Above ? "-" : "+") + " gravity(r2) * (at(half(r1), 2) + " +
             num(extra) + ")";
    } else {
      const bool lateral = region == Region::LeftOf || region == Region::RightOf;
      const int axis = lateral ? 0 : 2;
      const Vec3 dir = pose.rotation().row(axis).transpose();
      const double d = half_width_along(o.box, dir) + 0.1;
      const double sign = (region == Region::RightOf || region == Region::Behind) ? 1.0 : -1.0;
      if (region == Region::InFront && cam_center.z() - d < 0.2) continue;
      Vec3 offset = Vec3::Zero();
      offset[axis] = sign * d;
      body = "c + " + vec_literal(offset);
    }
    const std::string program =
        "let c = xform(r2, center(r1));\nxform(inv_pose(r2), " + body + ")";
    // Check the plan on a scratch builder before committing it.
    Rng scratch_rng(0);
    PlanBuilder scratch(s, scratch_rng);
    Value point;
    try {
      scratch.box3(*target);
      scratch.extrinsics(view);
      point = scratch.code(program, {"r1", "r2"});
      scratch.call("point_3d_to_point_2d",
                   {PlanBuilder::view_arg(view), {"point", point}});
    } catch (const Error&) {
      continue;
    }
    if (!spatial_relation(point_box(point.as<Point3>().vec()), o.box, pose,
                          relation_for(region))) {
      continue;
    }
    static const std::vector<std::string> kBank = {
        "In view {v}, pick a point {r} the {a}. Answer with normalized image coordinates.",
        "Point to a spot {r} the {a} in view {v}, as normalized (x, y)."};
    std::string where;
    switch (region) {
      case Region::Above: where = "above"; break;
      case Region::Below: where = "below"; break;
      case Region::LeftOf: where = "to the left of"; break;
      case Region::RightOf: where = "to the right of"; break;
      case Region::InFront: where = "in front of"; break;
      case Region::Behind: where = "behind"; break;
    }
    const std::string question =
        phrase(rng, kBank, {{"a", o.label}, {"r", where}, {"v", std::to_string(view)}});
    b.think("Lift the " + o.label + " to 3D, offset in the camera frame, then project.");
    b.box3(*target);
    b.extrinsics(view);
    const Value p = b.code(program, {"r1", "r2"});
    b.call("point_3d_to_point_2d", {PlanBuilder::view_arg(view), {"point", p}});
    return {question, {}, {view}};
  }
  insufficient("no feasible region around the object");
}

Built metric_offset(PlanBuilder& b, const Scene& s, Rng& rng) {
  const auto target = b.target(all_views(s));
  if (!target) insufficient("no resolvable object");
  const ObjectNode& o = *target->object;
  const std::size_t view = target->view;
  static const double kOffsets[] = {0.1, 0.15, 0.2};
  const double offset = kOffsets[rng.below(3)];
  struct Dir {
    const char* words;
    int axis;
    int sign;
  };
  static const Dir kDirs[] = {{"to the right of", 0, 1},
                              {"to the left of", 0, -1},
                              {"behind", 2, 1},
                              {"in front of", 2, -1}};
  const Dir& dir = kDirs[rng.below(4)];
  const std::string program =
      "let d = " + std::string(dir.sign > 0 ? "" : "-") + "row(rot(r2), " +
      std::to_string(dir.axis) +
      ");\n"
      "let a0 = matmul(rotz(yaw(r1)), vec(1, 0, 0));\n"
      "let a1 = matmul(rotz(yaw(r1)), vec(0, 1, 0));\n"
      "let s0 = dot(a0, d);\n"
      "let s1 = dot(a1, d);\n"
      "if abs(s0) >= abs(s1)\n"
      "then center(r1) + a0 * ((at(half(r1), 0) + " + num(offset) +
      ") * (if s0 >= 0 then 1 else -1))\n"
      "else center(r1) + a1 * ((at(half(r1), 1) + " + num(offset) +
      ") * (if s1 >= 0 then 1 else -1))";
  static const std::vector<std::string> kBank = {
      "In view {v}, where should an object be placed so that it sits {d} m {r} the {a}? "
      "Give the world coordinates of the placement point.",
      "Place a marker {d} m {r} the {a} as seen in view {v}. What are its world "
      "coordinates?"};
  const std::string question = phrase(
      rng, kBank,
      {{"a", o.label}, {"r", dir.words}, {"d", num(offset)}, {"v", std::to_string(view)}});
  b.think("Find the face of the " + o.label + " that points " + dir.words +
          " the camera direction and step out from it.");
  b.box3(*target);
  b.extrinsics(view);
  const Value p = b.code(program, {"r1", "r2"});
  const double dist = obb_distance(point_box(p.as<Point3>().vec()), o.box);
  if (!check_interval(dist, offset - 0.05, offset + 0.05)) {
    throw Error(ErrorCode::GenerationFailure, "placement point misses its interval");
  }
  return {question, {}, {view}};
}

}  // namespace

void SceneParams::validate() const {
  if (min_objects < 1 || max_objects < min_objects) config_error("object count range is invalid");
  if (min_views < 1 || max_views < min_views) config_error("view count range is invalid");
  if (labels.size() < std::size_t(max_objects)) {
    config_error("label vocabulary is smaller than the object count");
  }
  std::vector<std::string> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    config_error("labels must be unique");
  }
  auto positive_range = [](double lo, double hi, const char* what) {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
      config_error(std::string(what) + " range is invalid");
    }
  };
  if (!(room_half_extent > 0.0) || !std::isfinite(room_half_extent)) {
    config_error("room extent must be positive");
  }
  positive_range(orbit_radius_min, orbit_radius_max, "orbit radius");
  positive_range(camera_height_min, camera_height_max, "camera height");
  positive_range(orbit_step_min_deg, orbit_step_max_deg, "orbit step");
  if (!(min_gap > 0.0) || !std::isfinite(min_gap)) config_error("min_gap must be positive");
  if (max_attempts < 1) config_error("max_attempts must be positive");
}

CameraIntrinsics default_intrinsics() { return {500.0, 500.0, 320.0, 240.0, 640, 480}; }

Scene generate_scene(const SceneParams& params, std::uint64_t seed) {
  params.validate();
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    Rng rng(derive_seed(seed, 0x5CE7E, std::uint64_t(attempt)));
    if (auto scene = try_layout(params, rng)) return *scene;
  }
  throw Error(ErrorCode::PlacementFailure,
              "no valid layout after " + std::to_string(params.max_attempts) + " attempts");
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::ObjectSize: return "object_size";
    case Family::InterObjectDistance: return "inter_object_distance";
    case Family::SpatialLayoutMCQ: return "spatial_layout_mcq";
    case Family::ObjectDepth: return "object_depth";
    case Family::RelativeCameraPose: return "relative_camera_pose";
    case Family::Point3DTarget: return "point_3d_target";
    case Family::Pixel2DTarget: return "pixel_2d_target";
    case Family::MetricOffsetPlacement: return "metric_offset_placement";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view text) {
  for (Family f : kFamilies) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

std::string_view to_string(ImageConfig images) {
  return images == ImageConfig::SingleView ? "single" : "multi";
}

std::optional<ImageConfig> parse_image_config(std::string_view text) {
  if (text == "single") return ImageConfig::SingleView;
  if (text == "multi") return ImageConfig::MultiView;
  return std::nullopt;
}

bool compatible(Family family, AnswerFormat format) {
  switch (family) {
    case Family::ObjectSize:
    case Family::InterObjectDistance:
    case Family::ObjectDepth: return format == AnswerFormat::Scalar;
    case Family::SpatialLayoutMCQ: return format == AnswerFormat::Choice;
    case Family::RelativeCameraPose:
      return format == AnswerFormat::Choice || format == AnswerFormat::Pose;
    case Family::Point3DTarget:
    case Family::MetricOffsetPlacement: return format == AnswerFormat::Point3;
    case Family::Pixel2DTarget: return format == AnswerFormat::Point2;
  }
  return false;
}

bool compatible(Family family, ImageConfig images) {
  switch (family) {
    case Family::InterObjectDistance: return true;
    case Family::RelativeCameraPose: return images == ImageConfig::MultiView;
    default: return images == ImageConfig::SingleView;
  }
}

void Template::validate() const {
  if (!compatible(family, format)) {
    throw Error(ErrorCode::InvalidArgument, std::string(to_string(family)) +
                                                " cannot answer in format " +
                                                std::string(to_string(format)));
  }
  if (!compatible(family, images)) {
    throw Error(ErrorCode::InvalidArgument, std::string(to_string(family)) +
                                                " does not support " +
                                                std::string(to_string(images)) + "-view images");
  }
}

std::vector<Template> default_templates() {
  using F = Family;
  using I = ImageConfig;
  using A = AnswerFormat;
  return {{F::ObjectSize, I::SingleView, A::Scalar},
          {F::InterObjectDistance, I::SingleView, A::Scalar},
          {F::InterObjectDistance, I::MultiView, A::Scalar},
          {F::SpatialLayoutMCQ, I::SingleView, A::Choice},
          {F::ObjectDepth, I::SingleView, A::Scalar},
          {F::RelativeCameraPose, I::MultiView, A::Choice},
          {F::RelativeCameraPose, I::MultiView, A::Pose},
          {F::Point3DTarget, I::SingleView, A::Point3},
          {F::Pixel2DTarget, I::SingleView, A::Point2},
          {F::MetricOffsetPlacement, I::SingleView, A::Point3}};
}

Value derive_answer(Family family, AnswerFormat format, const Value& last) {
  if (!compatible(family, format)) {
    throw Error(ErrorCode::InvalidArgument, "format does not fit the family");
  }
  switch (format) {
    case AnswerFormat::Scalar:
      if (const auto* s = last.get_if<Scalar>()) return Scalar{s->value, "m"};
      break;
    case AnswerFormat::Choice:
      if (const auto* s = last.get_if<Scalar>()) {
        if (s->value >= 0.0 && s->value < 6.0 && s->value == std::floor(s->value)) {
          return Choice{char('A' + int(s->value))};
        }
      }
      break;
    case AnswerFormat::Pose:
      if (last.is<Matrix>()) return last;
      break;
    case AnswerFormat::Point3:
      if (last.is<Point3>()) return last;
      break;
    case AnswerFormat::Point2:
      if (last.is<NormPoint2>()) return List{{last}};
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "final tool result does not fit the answer format");
}

Sample instantiate(const Template& tpl, const Scene& scene, std::uint64_t seed) {
  tpl.validate();
  scene.validate();
  if (scene.objects.empty()) insufficient("scene has no objects");
  if (tpl.images == ImageConfig::MultiView && scene.views.size() < 2) {
    insufficient("multi-view template on a single-view scene");
  }
  Rng rng(seed);
  PlanBuilder builder(scene, rng);
  Built built;
  switch (tpl.family) {
    case Family::ObjectSize: built = object_size(builder, scene, rng); break;
    case Family::InterObjectDistance:
      built = inter_object_distance(builder, scene, rng, tpl.images);
      break;
    case Family::SpatialLayoutMCQ: built = spatial_layout(builder, scene, rng); break;
    case Family::ObjectDepth: built = object_depth(builder, scene, rng); break;
    case Family::RelativeCameraPose:
      built = relative_camera_pose(builder, scene, rng, tpl.format);
      break;
    case Family::Point3DTarget: built = point3d_target(builder, scene, rng); break;
    case Family::Pixel2DTarget: built = pixel2d_target(builder, scene, rng); break;
    case Family::MetricOffsetPlacement: built = metric_offset(builder, scene, rng); break;
  }
  Sample sample;
  sample.scene = scene;
  sample.views = built.views;
  sample.question = built.question;
  sample.answer = derive_answer(tpl.family, tpl.format, builder.last_result());
  sample.format = tpl.format;
  sample.family = tpl.family;
  sample.seed = seed;
  sample.trajectory = builder.finish(sample.answer, tpl.format);
  return sample;
}

bool self_check(const Sample& sample) {
  try {
    const Trajectory& t = sample.trajectory;
    if (!compatible(sample.family, sample.format)) return false;
    if (!validate_format(t)) return false;
    const Answer* answer = t.answer();
    if (!answer || answer->format != sample.format || !(answer->value == sample.answer)) {
      return false;
    }
    ExecutionContext ctx(sample.scene, BoxMode::Oracle);
    const Trajectory replay = run_trajectory(ctx, t);
    if (render_trajectory(replay) != render_trajectory(t)) return false;
    const ToolResult* last = nullptr;
    for (const auto& step : t.steps) {
      if (const auto* r = std::get_if<ToolResult>(&step)) last = r;
    }
    if (!last) return false;
    return derive_answer(sample.family, sample.format, last->value) == sample.answer;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace tiger
