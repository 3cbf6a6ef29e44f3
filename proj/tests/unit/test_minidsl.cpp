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

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "tiger/minidsl.hpp"
#include "tiger/random.hpp"

using namespace tiger;

namespace {

Value run(std::string_view src, const std::map<std::string, Value>& b = {}) {
  std::vector<std::string> names;
  for (const auto& [k, v] : b) names.push_back(k);
  return dsl::eval(dsl::parse_program(src, names), b);
}

double num(std::string_view src, const std::map<std::string, Value>& b = {}) {
  return run(src, b).as<Scalar>().value;
}

// Random well-formed expression over numbers, arithmetic, comparisons and
// a few builtins.
std::string random_expr(Rng& rng, int depth) {
  if (depth == 0 || rng.below(4) == 0) {
    return std::to_string(int(rng.below(9)) + 1);
  }
  switch (rng.below(7)) {
    case 0: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
    case 1: return "(" + random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1) + ")";
    case 2: return "-" + random_expr(rng, depth - 1);
    case 3:
      return "(if " + random_expr(rng, depth - 1) + " < " + random_expr(rng, depth - 1) +
             " then " + random_expr(rng, depth - 1) + " else " + random_expr(rng, depth - 1) + ")";
    case 4: return "max(" + random_expr(rng, depth - 1) + ", " + random_expr(rng, depth - 1) + ")";
    case 5: return "norm(vec(" + random_expr(rng, depth - 1) + ", 1, 2))";
    default: return "abs(" + random_expr(rng, depth - 1) + ")";
  }
}

}  // namespace

TEST_SUITE("minidsl") {

TEST_CASE("anchor: norm(vec(3, 4, 0)) is 5") {
  CHECK(num("norm(vec(3, 4, 0))") == 5.0);
}

TEST_CASE("builtin table audit") {
  const std::vector<std::string_view> expected = {
      "norm", "dot", "cross", "matmul", "transpose", "inv3", "rotz", "abs",
      "min", "max", "clamp", "sqrt", "atan2", "obb_dist", "project_point",
      "unproject_point", "argmin", "vec", "mat", "at", "row", "center", "half",
      "yaw", "obb", "rot", "trans", "cam_center", "inv_pose", "xform", "gravity",
      "orbit_angle"};
  std::vector<std::string_view> names;
  for (const auto& b : dsl::builtins()) names.push_back(b.name);
  CHECK(names == expected);
  // No I/O, clock, randomness, reflection or process control.
  const std::vector<std::string_view> forbidden = {
      "open", "read", "write", "print", "file", "time", "clock", "now", "rand",
      "random", "seed", "sleep", "exec", "system", "eval", "import", "env", "socket"};
  for (const auto& n : names) {
    for (const auto& f : forbidden) {
      CHECK_MESSAGE(n.find(f) == std::string_view::npos, n);
    }
  }
  for (const auto& b : dsl::builtins()) {
    CHECK(b.min_args >= 0);
    CHECK((b.max_args == -1 || b.max_args >= b.min_args));
    CHECK_FALSE(b.summary.empty());
  }
  CHECK_TIGER_ERROR(dsl::parse_program("time()"), ErrorCode::UnboundIdentifier);
  CHECK_TIGER_ERROR(dsl::parse_program("print(1)"), ErrorCode::UnboundIdentifier);
}

TEST_CASE("arithmetic and control flow") {
  CHECK(num("1 + 2 * 3") == 7.0);
  CHECK(num("(1 + 2) * 3") == 9.0);
  CHECK(num("-2 - -3") == 1.0);
  CHECK(num("let a = 2; let b = a * a; b + 1") == 5.0);
  CHECK(num("if 1 < 2 and not (3 < 2) then 10 else 20") == 10.0);
  CHECK(num("if 1 == 2 or 2 != 2 then 10 else 20") == 20.0);
  CHECK(num("# comment\n 4 / 2;") == 2.0);
  CHECK(num("clamp(5, 0, 1)") == 1.0);
  CHECK(num("atan2(1, 1)") == doctest::Approx(kPi / 4));
  CHECK(num("argmin([3, 1, 2])") == 1.0);
}

TEST_CASE("vectors, matrices and boxes") {
  CHECK(run("vec(1, 2, 3) + vec(1, 1, 1)") == Value(Point3{2, 3, 4}));
  CHECK(run("cross(vec(1, 0, 0), vec(0, 1, 0))") == Value(Point3{0, 0, 1}));
  CHECK(num("dot(vec(1, 2), vec(3, 4))") == 11.0);
  CHECK(run("matmul([[1, 2], [3, 4]], vec(1, 1))") == Value(NormPoint2{3, 7}));
  CHECK(num("at(inv3([[2, 0, 0], [0, 4, 0], [0, 0, 8]]), 1, 1)") == 0.25);
  const auto box = OrientedBox3::make(Vec3(1, 2, 3), Vec3(0.5, 0.5, 1), 0.3);
  const std::map<std::string, Value> b = {{"r1", box}};
  CHECK(run("center(r1)", b) == Value(Point3{1, 2, 3}));
  CHECK(num("yaw(r1)", b) == 0.3);
  CHECK(num("obb_dist(r1, obb(vec(5, 2, 3), vec(0.5, 0.5, 1), 0))", b) ==
        doctest::Approx(obb_distance(box, OrientedBox3::make(Vec3(5, 2, 3), Vec3(0.5, 0.5, 1), 0))));
  const Pose p = Pose::look_at(Vec3(1, -3, 2), Vec3(0, 0, 0));
  const std::map<std::string, Value> pb = {{"p", Matrix::of(p.matrix())}};
  const Value c = run("cam_center(p)", pb);
  CHECK((c.as<Point3>().vec() - Vec3(1, -3, 2)).norm() < 1e-12);
  const Value back = run("xform(inv_pose(p), xform(p, vec(0.3, 0.2, 0.1)))", pb);
  CHECK((back.as<Point3>().vec() - Vec3(0.3, 0.2, 0.1)).norm() < 1e-12);
  const Value g = run("gravity(p)", pb);
  CHECK((g.as<Point3>().vec() - gravity_direction(p)).norm() < 1e-12);
}

TEST_CASE("runtime errors") {
  CHECK_TIGER_ERROR(run("1 / 0"), ErrorCode::DivisionByZero);
  CHECK_TIGER_ERROR(run("vec(1, 2) + vec(1, 2, 3)"), ErrorCode::TypeMismatch);
  CHECK_TIGER_ERROR(run("inv3([[1, 2, 3], [2, 4, 6], [0, 0, 1]])"), ErrorCode::SingularMatrix);
  CHECK_TIGER_ERROR(run("sqrt(-1)"), ErrorCode::InvalidArgument);
  CHECK_TIGER_ERROR(run("at(vec(1, 2), 5)"), ErrorCode::InvalidArgument);
  CHECK_TIGER_ERROR(run("clamp(1, 2, 0)"), ErrorCode::InvalidArgument);
  CHECK_TIGER_ERROR(dsl::parse_program("x + 1"), ErrorCode::UnboundIdentifier);
  CHECK_TIGER_ERROR(dsl::parse_program("norm()"), ErrorCode::SyntaxError);
  CHECK_TIGER_ERROR(dsl::parse_program("1 +"), ErrorCode::SyntaxError);
  CHECK_TIGER_ERROR(dsl::parse_program("let = 3; 1"), ErrorCode::SyntaxError);
}

TEST_CASE("limits") {
  const auto prog = dsl::parse_program("1 + 2 + 3 + 4");
  dsl::EvalLimits tight;
  tight.max_steps = 2;
  CHECK_TIGER_ERROR(dsl::eval(prog, {}, tight), ErrorCode::LimitExceeded);
  std::string deep;
  for (int i = 0; i < 500; ++i) deep += "(";
  deep += "1";
  for (int i = 0; i < 500; ++i) deep += ")";
  CHECK_TIGER_ERROR(dsl::parse_program(deep), ErrorCode::SyntaxError);
}

TEST_CASE("evaluation halts within the AST-size step bound") {
  Rng rng(123);
  for (int i = 0; i < 2000; ++i) {
    const std::string src = random_expr(rng, 6);
    const auto prog = dsl::parse_program(src);
    dsl::EvalLimits limits;
    limits.max_steps = prog.node_count();
    try {
      dsl::eval(prog, {}, limits);
    } catch (const Error& e) {
      CHECK_MESSAGE(e.code() != ErrorCode::LimitExceeded, src);
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  const std::string src = "let a = rotz(0.3); matmul(a, vec(1, 2, 3))";
  CHECK(run(src) == run(src));
}

}  // TEST_SUITE
