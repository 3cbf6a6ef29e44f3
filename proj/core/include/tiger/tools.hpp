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

// Geometric tools simulated against ground-truth scenes.
//
//   camera_intrinsics(view=k)               [fx, fy, cx, cy, width, height]
//   camera_extrinsics(view=k)               4x4 camera-from-world matrix
//   depth_sensor(view=k, point=p)           depth at a pixel or normalized point
//   depth_sensor(view=k, box=box(...))      [median, mean, valid_fraction]
//   object_segmentation(view=k, box=...)    run-length mask, rows (v, u0, len)
//   box_2d_to_box_3d(view=k, box=...)       obb(...)
//   point_3d_to_point_2d(view=k, point=(x, y, z))   normalized (x, y)
//   code_executor(program="...", uses=["r1", ...])  minidsl result
//
// object_segmentation and box_2d_to_box_3d also accept label="..." in place
// of a box. The result of the k-th call in a run is bound as "r<k>".

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tiger/minidsl.hpp"
#include "tiger/scene.hpp"
#include "tiger/trajectory.hpp"
#include "tiger/value.hpp"

namespace tiger {

enum class ArgType {
  ViewIndex,  // non-negative integer scalar without a unit
  ImagePoint, // pixel or normalized point
  WorldPoint, // 3D point
  Box,        // 2D box
  Label,      // text
  Program,    // text
  Labels,     // list of text
};

struct ArgSpec {
  std::string_view name;
  ArgType type;
  bool required;
  /// Compared by exact match when scoring; otherwise by distance.
  bool discrete;
};

struct ToolSchema {
  std::string_view name;
  std::vector<ArgSpec> args;
  /// Exactly one of these optional arguments must be present (may be empty).
  std::vector<std::string_view> one_of;
};

std::span<const ToolSchema> tool_schemas();
const ToolSchema* find_schema(std::string_view name);

bool arg_matches(const Value& v, ArgType type);
/// Registered tool, no unknown or duplicate arguments, required arguments
/// present and typed, exclusive group satisfied.
bool schema_valid(const ToolCall& call);

enum class BoxMode { Oracle, Fitted };

struct ExecutionContext {
  explicit ExecutionContext(const Scene& s, BoxMode m = BoxMode::Oracle)
      : scene(&s), mode(m) {}

  const Scene* scene;
  BoxMode mode;
  std::map<std::string, Value> bindings;
  std::size_t calls = 0;
  dsl::EvalLimits limits;
};

/// Runs one call and binds its result as r<calls>. Throws UnknownTool,
/// SchemaError, UnknownView, OutOfBounds, EmptyRegion, BehindCamera and
/// minidsl errors.
Value execute_tool(ExecutionContext& ctx, const ToolCall& call);

/// Executes every call in order and writes each result into the response
/// step that follows it (inserting one when missing). Errors carry the index
/// of the failing step.
Trajectory run_trajectory(ExecutionContext& ctx, const Trajectory& t);

/// Object owning the most nearest-hit pixels inside `box`; ties go to the
/// smaller id. Throws EmptyRegion when no object is hit.
int majority_object(const Scene& scene, std::size_t view, const Box2& box);

}  // namespace tiger
