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

#include "tiger/tools.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tiger/error.hpp"
#include "tiger/raycast.hpp"

namespace tiger {

namespace {

const std::vector<ToolSchema>& schemas() {
  static const std::vector<ToolSchema> kSchemas = {
      {"camera_intrinsics", {{"view", ArgType::ViewIndex, true, true}}, {}},
      {"camera_extrinsics", {{"view", ArgType::ViewIndex, true, true}}, {}},
      {"depth_sensor",
       {{"view", ArgType::ViewIndex, true, true},
        {"point", ArgType::ImagePoint, false, false},
        {"box", ArgType::Box, false, false}},
       {"point", "box"}},
      {"object_segmentation",
       {{"view", ArgType::ViewIndex, true, true},
        {"box", ArgType::Box, false, false},
        {"label", ArgType::Label, false, true}},
       {"box", "label"}},
      {"box_2d_to_box_3d",
       {{"view", ArgType::ViewIndex, true, true},
        {"box", ArgType::Box, false, false},
        {"label", ArgType::Label, false, true}},
       {"box", "label"}},
      {"point_3d_to_point_2d",
       {{"view", ArgType::ViewIndex, true, true},
        {"point", ArgType::WorldPoint, true, false}},
       {}},
      {"code_executor",
       {{"program", ArgType::Program, true, true},
        {"uses", ArgType::Labels, false, true}},
       {}},
  };
  return kSchemas;
}

[[noreturn]] void schema_error(const ToolCall& call, const std::string& why) {
  throw Error(ErrorCode::SchemaError, call.name + ": " + why);
}

std::size_t view_of(const ToolCall& call) {
  return std::size_t(call.arg("view")->as<Scalar>().value);
}

Vec2 pixel_of(const Scene& scene, const Value& v) {
  if (const auto* p = v.get_if<PixelPoint2>()) return Vec2(p->u, p->v);
  const auto& n = v.as<NormPoint2>();
  return scene.intrinsics.denormalize(Vec2(n.x, n.y));
}

// Pixels in `box` whose nearest hit is `object`.
std::vector<std::pair<int, int>> object_mask(const Scene& scene,
                                             std::size_t view, const Box2& box,
                                             int object) {
  std::vector<std::pair<int, int>> out;
  for (const auto& [u, v] : pixels_in_box(scene.intrinsics, box)) {
    const auto hit = cast_ray(scene, view, Vec2(u + 0.5, v + 0.5));
    if (hit && hit->object == object) out.emplace_back(u, v);
  }
  return out;
}

// Resolves the box-or-label argument to (object, region box).
std::pair<int, Box2> resolve_target(const Scene& scene, std::size_t view,
                                    const ToolCall& call) {
  if (const Value* b = call.arg("box")) {
    const Box2 box = b->as<Box2>();
    return {majority_object(scene, view, box), box};
  }
  const std::string& label = call.arg("label")->as<Text>().text;
  const ObjectNode* node = scene.find_label(label);
  if (!node) {
    throw Error(ErrorCode::EmptyRegion, "no object labelled '" + label + "'");
  }
  const auto box = scene.projected_box(*node, view);
  if (!box) {
    throw Error(ErrorCode::EmptyRegion,
                "object '" + label + "' is not in view " + std::to_string(view));
  }
  return {node->id, *box};
}

Value run_code(ExecutionContext& ctx, const ToolCall& call) {
  const std::string& source = call.arg("program")->as<Text>().text;
  std::vector<std::string> uses;
  if (const Value* u = call.arg("uses")) {
    for (const auto& item : u->as<List>().items) {
      uses.push_back(item.as<Text>().text);
    }
  }
  std::map<std::string, Value> bindings;
  for (const auto& name : uses) {
    const auto it = ctx.bindings.find(name);
    if (it == ctx.bindings.end()) {
      throw Error(ErrorCode::UnboundIdentifier,
                  "no earlier result named '" + name + "'");
    }
    bindings.emplace(name, it->second);
  }
  const dsl::Program program = dsl::parse_program(source, uses);
  return dsl::eval(program, bindings, ctx.limits);
}

Value run_tool(ExecutionContext& ctx, const ToolCall& call) {
  const Scene& scene = *ctx.scene;
  const std::string& name = call.name;
  if (name == "code_executor") return run_code(ctx, call);

  const std::size_t view = view_of(call);
  const Pose& pose = scene.view(view);
  const auto& k = scene.intrinsics;

  if (name == "camera_intrinsics") {
    return List{{Scalar{k.fx, {}}, Scalar{k.fy, {}}, Scalar{k.cx, {}},
                 Scalar{k.cy, {}}, Scalar{double(k.width), {}},
                 Scalar{double(k.height), {}}}};
  }
  if (name == "camera_extrinsics") return Matrix::of(pose.matrix());

  if (name == "depth_sensor") {
    if (const Value* p = call.arg("point")) {
      const auto hit = cast_ray(scene, view, pixel_of(scene, *p));
      if (!hit) throw Error(ErrorCode::EmptyRegion, "no surface at the point");
      return Scalar{hit->depth, {}};
    }
    const auto pixels = pixels_in_box(k, call.arg("box")->as<Box2>());
    std::vector<double> depths;
    for (const auto& [u, v] : pixels) {
      const auto hit = cast_ray(scene, view, Vec2(u + 0.5, v + 0.5));
      if (hit) depths.push_back(hit->depth);
    }
    if (depths.empty()) throw Error(ErrorCode::EmptyRegion, "no valid depth in the box");
    std::sort(depths.begin(), depths.end());
    const std::size_t n = depths.size();
    const double median =
        n % 2 ? depths[n / 2] : 0.5 * (depths[n / 2 - 1] + depths[n / 2]);
    double sum = 0.0;
    for (double d : depths) sum += d;
    return List{{Scalar{median, {}}, Scalar{sum / double(n), {}},
                 Scalar{double(n) / double(pixels.size()), {}}}};
  }

  if (name == "object_segmentation") {
    const auto [object, box] = resolve_target(scene, view, call);
    const auto mask = object_mask(scene, view, box, object);
    if (mask.empty()) throw Error(ErrorCode::EmptyRegion, "empty mask");
    Matrix rle{0, 3, {}};
    for (std::size_t i = 0; i < mask.size();) {
      std::size_t j = i + 1;
      while (j < mask.size() && mask[j].second == mask[i].second &&
             mask[j].first == mask[j - 1].first + 1) {
        ++j;
      }
      rle.data.insert(rle.data.end(), {double(mask[i].second), double(mask[i].first),
                                       double(j - i)});
      ++rle.rows;
      i = j;
    }
    return rle;
  }

  if (name == "box_2d_to_box_3d") {
    const auto [object, box] = resolve_target(scene, view, call);
    if (ctx.mode == BoxMode::Oracle) return scene.find(object)->box;
    const auto mask = object_mask(scene, view, box, object);
    const Pose world_from_camera = invert(pose);
    std::vector<Vec3> points;
    points.reserve(mask.size());
    for (const auto& [u, v] : mask) {
      const Vec2 px(u + 0.5, v + 0.5);
      const auto hit = cast_ray(scene, view, px);
      points.push_back(transform(world_from_camera, unproject(px, hit->depth, k)));
    }
    if (points.size() < 3) {
      throw Error(ErrorCode::EmptyRegion, "too few masked pixels to fit a box");
    }
    return fit_obb(points).box;
  }

  if (name == "point_3d_to_point_2d") {
    const Projection p = project(call.arg("point")->as<Point3>().vec(), k, pose);
    if (!k.contains_pixel(p.pixel)) {
      throw Error(ErrorCode::OutOfBounds, "point projects outside the image");
    }
    return NormPoint2{p.normalized.x(), p.normalized.y()};
  }
  throw Error(ErrorCode::UnknownTool, name);
}

}  // namespace

std::span<const ToolSchema> tool_schemas() { return schemas(); }

const ToolSchema* find_schema(std::string_view name) {
  for (const auto& s : schemas()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

bool arg_matches(const Value& v, ArgType type) {
  if (!well_typed(v)) return false;
  switch (type) {
    case ArgType::ViewIndex: {
      const auto* s = v.get_if<Scalar>();
      return s && s->unit.empty() && s->value >= 0.0 &&
             s->value == std::floor(s->value) && s->value < 1e6;
    }
    case ArgType::ImagePoint: return v.is<PixelPoint2>() || v.is<NormPoint2>();
    case ArgType::WorldPoint: return v.is<Point3>();
    case ArgType::Box: return v.is<Box2>();
    case ArgType::Label:
    case ArgType::Program: return v.is<Text>();
    case ArgType::Labels: {
      const auto* l = v.get_if<List>();
      return l && std::all_of(l->items.begin(), l->items.end(),
                              [](const Value& x) { return x.is<Text>(); });
    }
  }
  return false;
}

bool schema_valid(const ToolCall& call) {
  const ToolSchema* schema = find_schema(call.name);
  if (!schema) return false;
  std::set<std::string_view> seen;
  for (const auto& a : call.args) {
    if (!seen.insert(a.name).second) return false;
    const auto it = std::find_if(schema->args.begin(), schema->args.end(),
                                 [&](const ArgSpec& s) { return s.name == a.name; });
    if (it == schema->args.end() || !arg_matches(a.value, it->type)) return false;
  }
  for (const auto& s : schema->args) {
    if (s.required && !seen.count(s.name)) return false;
  }
  if (!schema->one_of.empty()) {
    const auto present = std::count_if(schema->one_of.begin(), schema->one_of.end(),
                                       [&](std::string_view n) { return seen.count(n) > 0; });
    if (present != 1) return false;
  }
  return true;
}

int majority_object(const Scene& scene, std::size_t view, const Box2& box) {
  std::map<int, std::size_t> counts;
  for (const auto& [u, v] : pixels_in_box(scene.intrinsics, box)) {
    const auto hit = cast_ray(scene, view, Vec2(u + 0.5, v + 0.5));
    if (hit && hit->object) ++counts[*hit->object];
  }
  if (counts.empty()) throw Error(ErrorCode::EmptyRegion, "no object inside the box");
  // std::map iterates ids ascending, so strict > keeps the smaller id on ties.
  int best = counts.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [id, n] : counts) {
    if (n > best_count) {
      best = id;
      best_count = n;
    }
  }
  return best;
}

Value execute_tool(ExecutionContext& ctx, const ToolCall& call) {
  if (!is_registered_tool(call.name)) {
    throw Error(ErrorCode::UnknownTool, "'" + call.name + "' is not a registered tool");
  }
  if (!schema_valid(call)) schema_error(call, "arguments do not match the schema");
  Value out = run_tool(ctx, call);
  ++ctx.calls;
  ctx.bindings["r" + std::to_string(ctx.calls)] = out;
  return out;
}

Trajectory run_trajectory(ExecutionContext& ctx, const Trajectory& t) {
  Trajectory out;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& step = t.steps[i];
    if (std::holds_alternative<ToolResult>(step)) continue;  // recomputed below
    out.steps.push_back(step);
    const auto* call = std::get_if<ToolCall>(&step);
    if (!call) continue;
    try {
      out.steps.push_back(ToolResult{execute_tool(ctx, *call)});
    } catch (const Error& e) {
      throw e.with_step(i);
    }
  }
  return out;
}

}  // namespace tiger
