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

#include <cmath>

#include "fixtures.hpp"
#include "tiger/raycast.hpp"
#include "tiger/tools.hpp"

using namespace tiger;

namespace {

ToolCall call(std::string_view text) {
  const Trajectory t = parse_trajectory("<tool_call>" + std::string(text) +
                                        "</tool_call><answer format=choice>A</answer>");
  return *t.calls().front();
}

}  // namespace

TEST_SUITE("tools") {

TEST_CASE("camera tools") {
  const Scene s = fixtures::two_box_scene();
  ExecutionContext ctx(s);
  CHECK(execute_tool(ctx, call("camera_extrinsics(view=0)")) == Value(Matrix::of(Mat4::Identity().eval())));
  const Value k = execute_tool(ctx, call("camera_intrinsics(view=1)"));
  CHECK(render_value(k) == "[500, 500, 320, 240, 640, 480]");
  CHECK(ctx.calls == 2);
  CHECK(ctx.bindings.count("r1"));
  CHECK(ctx.bindings.at("r2") == k);
  CHECK_TIGER_ERROR(execute_tool(ctx, call("camera_extrinsics(view=5)")), ErrorCode::UnknownView);
  CHECK(ctx.calls == 2);
}

TEST_CASE("schemas") {
  CHECK(schema_valid(call("depth_sensor(view=1, point=(0.5, 0.5))")));
  CHECK(schema_valid(call("depth_sensor(view=1, box=box(1, 1, 20, 20))")));
  CHECK_FALSE(schema_valid(call("depth_sensor(view=1)")));
  CHECK_FALSE(schema_valid(call("depth_sensor(view=1, point=(0.5, 0.5), box=box(1, 1, 2, 2))")));
  CHECK_FALSE(schema_valid(call("camera_extrinsics(view=1.5)")));
  CHECK_FALSE(schema_valid(call("camera_extrinsics(view=-1)")));
  CHECK_FALSE(schema_valid(call("camera_extrinsics(view=1m)")));
  CHECK_FALSE(schema_valid(ToolCall{"camera_extrinsics", {{"view", Scalar{1, {}}}, {"view", Scalar{1, {}}}}}));
  CHECK_TIGER_ERROR(call("camera_extrinsics(view=1, view=1)"), ErrorCode::SyntaxError);
  CHECK_FALSE(schema_valid(call("camera_extrinsics(view=1, extra=2)")));
  CHECK_FALSE(schema_valid(call("code_executor(uses=[\"r1\"])")));
  CHECK(tool_schemas().size() == tool_names().size());
  const Scene s = fixtures::two_box_scene();
  ExecutionContext ctx(s);
  CHECK_TIGER_ERROR(execute_tool(ctx, call("depth_sensor(view=1)")), ErrorCode::SchemaError);
  CHECK_TIGER_ERROR(execute_tool(ctx, call("web_search(q=1)")), ErrorCode::UnknownTool);
}

TEST_CASE("depth sensor") {
  const Scene s = fixtures::two_box_scene();
  ExecutionContext ctx(s);
  const auto box = *s.projected_box(s.objects[0], 1);
  const Projection c = project(s.objects[0].box.center, s.intrinsics, s.views[1]);
  const Value d = execute_tool(
      ctx, ToolCall{"depth_sensor", {{"view", Scalar{1, {}}}, {"point", PixelPoint2{c.pixel.x(), c.pixel.y()}}}});
  CHECK(d.as<Scalar>().value == cast_ray(s, 1, c.pixel)->depth);
  CHECK(d.as<Scalar>().value < c.depth);  // front face is nearer than the center
  const Value stats = execute_tool(ctx, ToolCall{"depth_sensor", {{"view", Scalar{1, {}}}, {"box", box}}});
  const auto& items = stats.as<List>().items;
  REQUIRE(items.size() == 3);
  CHECK(items[2].as<Scalar>().value > 0.0);
  CHECK(items[2].as<Scalar>().value <= 1.0);
}

TEST_CASE("box lifting, oracle and fitted") {
  const Scene s = fixtures::two_box_scene();
  for (const auto& o : s.objects) {
    const auto box = *s.projected_box(o, 1);
    ExecutionContext oracle(s, BoxMode::Oracle);
    const ToolCall c{"box_2d_to_box_3d", {{"view", Scalar{1, {}}}, {"box", box}}};
    CHECK(execute_tool(oracle, c) == Value(o.box));
    ExecutionContext fitted(s, BoxMode::Fitted);
    const OrientedBox3 f = execute_tool(fitted, c).as<OrientedBox3>();
    CHECK((f.center.head<2>() - o.box.center.head<2>()).norm() < 0.25);
    CHECK(f.top() == doctest::Approx(o.box.top()).epsilon(0.02));
  }
  // Label sugar resolves through the projected box.
  ExecutionContext ctx(s);
  CHECK(execute_tool(ctx, call("box_2d_to_box_3d(view=2, label=\"table\")")) == Value(s.objects[1].box));
  CHECK_TIGER_ERROR(execute_tool(ctx, call("box_2d_to_box_3d(view=2, label=\"sofa\")")), ErrorCode::EmptyRegion);
  CHECK_TIGER_ERROR(execute_tool(ctx, call("box_2d_to_box_3d(view=1, box=box(0, 0, 5, 5))")), ErrorCode::EmptyRegion);
}

TEST_CASE("segmentation run-length rows cover the mask") {
  const Scene s = fixtures::two_box_scene();
  ExecutionContext ctx(s);
  const Value m = execute_tool(ctx, call("object_segmentation(view=1, label=\"chair\")"));
  const Matrix& rle = m.as<Matrix>();
  CHECK(rle.cols == 3);
  REQUIRE(rle.rows > 0);
  for (std::size_t r = 0; r < rle.rows; ++r) {
    const int v = int(rle.at(r, 0)), u0 = int(rle.at(r, 1)), n = int(rle.at(r, 2));
    for (int u = u0; u < u0 + n; u += std::max(1, n / 3)) {
      CHECK(cast_ray(s, 1, Vec2(u + 0.5, v + 0.5))->object == 1);
    }
  }
}

TEST_CASE("point projection tool") {
  const Scene s = fixtures::two_box_scene();
  ExecutionContext ctx(s);
  const Value p = execute_tool(ctx, call("point_3d_to_point_2d(view=1, point=(0, 0, 0.4))"));
  const Projection want = project(Vec3(0, 0, 0.4), s.intrinsics, s.views[1]);
  CHECK(p == Value(NormPoint2{want.normalized.x(), want.normalized.y()}));
  CHECK_TIGER_ERROR(execute_tool(ctx, call("point_3d_to_point_2d(view=1, point=(0, -10, 0.4))")),
                    ErrorCode::BehindCamera);
  CHECK_TIGER_ERROR(execute_tool(ctx, call("point_3d_to_point_2d(view=1, point=(30, 0, 0.4))")),
                    ErrorCode::OutOfBounds);
}

TEST_CASE("code executor reads earlier results") {
  const Scene s = fixtures::two_box_scene();
  ExecutionContext ctx(s);
  execute_tool(ctx, call("box_2d_to_box_3d(view=1, label=\"chair\")"));
  const Value h = execute_tool(ctx, call("code_executor(program=\"2 * at(half(r1), 2)\", uses=[\"r1\"])"));
  CHECK(h.as<Scalar>().value == doctest::Approx(0.8));
  CHECK_TIGER_ERROR(execute_tool(ctx, call("code_executor(program=\"r9\", uses=[\"r9\"])")),
                    ErrorCode::UnboundIdentifier);
  CHECK_TIGER_ERROR(execute_tool(ctx, call("code_executor(program=\"r1\")")), ErrorCode::UnboundIdentifier);
}

TEST_CASE("run_trajectory fills placeholders and reports failing steps") {
  const Scene s = fixtures::two_box_scene();
  const Trajectory t = parse_trajectory(
      "<think>x</think>\n<tool_call>camera_extrinsics(view=0)</tool_call>\n"
      "<tool_response></tool_response>\n<tool_call>camera_intrinsics(view=0)</tool_call>\n"
      "<answer format=choice>A</answer>");
  ExecutionContext ctx(s);
  const Trajectory filled = run_trajectory(ctx, t);
  REQUIRE(filled.steps.size() == 6);
  CHECK(std::get<ToolResult>(filled.steps[2]).value == Value(Matrix::of(Mat4::Identity().eval())));
  CHECK(std::get<ToolResult>(filled.steps[4]).value.is<List>());
  // Replaying the filled trajectory is a fixed point.
  ExecutionContext again(s);
  CHECK(render_trajectory(run_trajectory(again, filled)) == render_trajectory(filled));

  const Trajectory bad = parse_trajectory(
      "<think>x</think><tool_call>camera_extrinsics(view=0)</tool_call>"
      "<tool_call>nonexistent(view=0)</tool_call><answer format=choice>A</answer>");
  ExecutionContext c2(s);
  try {
    run_trajectory(c2, bad);
    FAIL("unknown tool executed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownTool);
    REQUIRE(e.step());
    CHECK(*e.step() == 2);
  }
}

TEST_CASE("majority object ties go to the smaller id") {
  const Scene s = fixtures::two_box_scene();
  const auto chair = *s.projected_box(s.objects[0], 1);
  CHECK(majority_object(s, 1, chair) == 1);
  CHECK_TIGER_ERROR(majority_object(s, 1, Box2{0, 0, 3, 3}), ErrorCode::EmptyRegion);
}

}  // TEST_SUITE
