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

#include "tiger/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json_io.hpp"
#include "tiger/error.hpp"

namespace tiger {

void Scene::validate() const {
  intrinsics.validate();
  if (views.empty()) {
    throw Error(ErrorCode::InvalidArgument, "scene has no views");
  }
  const Mat4 delta = views.front().matrix() - Mat4::Identity();
  if (delta.cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "view 0 must be the identity pose");
  }
  if (!std::isfinite(floor_z)) {
    throw Error(ErrorCode::InvalidArgument, "floor height must be finite");
  }
  std::set<int> ids;
  for (const auto& o : objects) {
    if (!ids.insert(o.id).second) {
      throw Error(ErrorCode::InvalidArgument,
                  "duplicate object id " + std::to_string(o.id));
    }
    if (!o.box.valid()) {
      throw Error(ErrorCode::InvalidArgument,
                  "object " + std::to_string(o.id) + " has an invalid box");
    }
    if (o.box.bottom() < floor_z - 1e-9) {
      throw Error(ErrorCode::InvalidArgument,
                  "object " + std::to_string(o.id) + " extends below the floor");
    }
  }
}

const Pose& Scene::view(std::size_t id) const {
  if (id >= views.size()) {
    throw Error(ErrorCode::UnknownView, "view " + std::to_string(id));
  }
  return views[id];
}

const ObjectNode* Scene::find(int id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

const ObjectNode* Scene::find_label(std::string_view label) const {
  for (const auto& o : objects) {
    if (o.label == label) return &o;
  }
  return nullptr;
}

std::optional<Box2> Scene::projected_box(const ObjectNode& object,
                                         std::size_t view_id) const {
  const Pose& pose = view(view_id);
  Box2 box{std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  for (const Vec3& corner : object.box.corners()) {
    const Vec3 cam = transform(pose, corner);
    if (cam.z() <= 1e-6) return std::nullopt;
    const Vec2 px = project_camera(cam, intrinsics).pixel;
    box.umin = std::min(box.umin, px.x());
    box.vmin = std::min(box.vmin, px.y());
    box.umax = std::max(box.umax, px.x());
    box.vmax = std::max(box.vmax, px.y());
  }
  box.umin = std::max(box.umin, 0.0);
  box.vmin = std::max(box.vmin, 0.0);
  box.umax = std::min(box.umax, double(intrinsics.width));
  box.vmax = std::min(box.vmax, double(intrinsics.height));
  if (!box.valid()) return std::nullopt;
  return box;
}

namespace detail {

json scene_to_json_value(const Scene& scene) {
  json doc;
  const auto& k = scene.intrinsics;
  doc["intrinsics"] = {{"fx", k.fx}, {"fy", k.fy},       {"cx", k.cx},
                       {"cy", k.cy}, {"width", k.width}, {"height", k.height}};
  json views = json::array();
  for (const auto& pose : scene.views) {
    const Mat4 m = pose.matrix();
    json rows = json::array();
    for (int r = 0; r < 4; ++r) {
      rows.push_back({m(r, 0), m(r, 1), m(r, 2), m(r, 3)});
    }
    views.push_back({{"pose", rows}});
  }
  doc["views"] = std::move(views);
  doc["floor_z"] = scene.floor_z;
  json objects = json::array();
  for (const auto& o : scene.objects) {
    const auto& b = o.box;
    objects.push_back(
        {{"id", o.id},
         {"label", o.label},
         {"center", {b.center.x(), b.center.y(), b.center.z()}},
         {"half_extents",
          {b.half_extents.x(), b.half_extents.y(), b.half_extents.z()}},
         {"yaw", b.yaw}});
  }
  doc["objects"] = std::move(objects);
  return doc;
}

namespace {

Vec3 vec3_of(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::ConfigError, std::string(what) + " must be [x,y,z]");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

}  // namespace

Scene scene_from_json_value(const json& doc) {
  Scene scene;
  try {
    const auto& k = doc.at("intrinsics");
    scene.intrinsics.fx = k.at("fx").get<double>();
    scene.intrinsics.fy = k.at("fy").get<double>();
    scene.intrinsics.cx = k.at("cx").get<double>();
    scene.intrinsics.cy = k.at("cy").get<double>();
    scene.intrinsics.width = k.at("width").get<int>();
    scene.intrinsics.height = k.at("height").get<int>();
    for (const auto& v : doc.at("views")) {
      const auto& rows = v.at("pose");
      if (!rows.is_array() || rows.size() != 4) {
        throw Error(ErrorCode::ConfigError, "pose must be 4x4");
      }
      Mat4 m;
      for (int r = 0; r < 4; ++r) {
        if (!rows[r].is_array() || rows[r].size() != 4) {
          throw Error(ErrorCode::ConfigError, "pose must be 4x4");
        }
        for (int c = 0; c < 4; ++c) m(r, c) = rows[r][c].get<double>();
      }
      scene.views.push_back(Pose::from_matrix(m));
    }
    scene.floor_z = doc.at("floor_z").get<double>();
    for (const auto& o : doc.at("objects")) {
      ObjectNode node;
      node.id = o.at("id").get<int>();
      node.label = o.at("label").get<std::string>();
      node.box.center = vec3_of(o.at("center"), "center");
      node.box.half_extents = vec3_of(o.at("half_extents"), "half_extents");
      node.box.yaw = o.at("yaw").get<double>();
      scene.objects.push_back(std::move(node));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("scene document: ") + e.what());
  }
  scene.validate();
  return scene;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace detail

std::string scene_to_json(const Scene& scene, int indent) {
  return detail::scene_to_json_value(scene).dump(indent);
}

Scene scene_from_json(std::string_view text) {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const detail::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("scene document: ") + e.what());
  }
  return detail::scene_from_json_value(doc);
}

Scene load_scene(const std::string& path) {
  return scene_from_json(detail::read_file(path));
}

void save_scene(const Scene& scene, const std::string& path) {
  detail::write_file(path, scene_to_json(scene, 2) + "\n");
}

}  // namespace tiger
