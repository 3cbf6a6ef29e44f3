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

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "fixtures.hpp"
#include "tiger/random.hpp"
#include "tiger/value.hpp"

using namespace tiger;

TEST_SUITE("value") {

TEST_CASE("literal kinds") {
  CHECK(parse_value("1.5").kind() == ValueKind::Scalar);
  CHECK(parse_value("1.5m").as<Scalar>().unit == "m");
  CHECK(parse_value("-2e-3").as<Scalar>().value == -2e-3);
  CHECK(parse_value("C").as<Choice>().letter == 'C');
  CHECK(parse_value("(0.25, 0.5)").kind() == ValueKind::NormPoint2);
  CHECK(parse_value("(1, 2, 3)").kind() == ValueKind::Point3);
  CHECK(parse_value("px(10, 20)").as<PixelPoint2>().v == 20.0);
  CHECK(parse_value("box(1, 2, 3, 4)").as<Box2>() == Box2{1, 2, 3, 4});
  const auto obb = parse_value("obb(center=(1, 2, 3), half=(0.5, 0.5, 1), yaw=0.25)");
  CHECK(obb.as<OrientedBox3>().yaw == 0.25);
  CHECK(parse_value("\"a \\\"b\\\" \\u00e9\"").as<Text>().text == "a \"b\" \xc3\xa9");
  const Value m = parse_value("[[1, 2], [3, 4]]");
  REQUIRE(m.is<Matrix>());
  CHECK(m.as<Matrix>().rows == 2);
  CHECK(m.as<Matrix>().at(1, 0) == 3.0);
  CHECK(parse_value("[[1, 2], [3]]").is<List>());
  CHECK(parse_value("[1m, 2]").is<List>());
  CHECK(parse_value("[]").as<List>().items.empty());
}

TEST_CASE("syntax errors carry offsets") {
  for (const char* bad : {"", "(", "(1,", "1.5.5", "box(1,2,3)", "\"abc", "[1,,2]", "G",
                          "obb(center=(1,2,3))", "1 2", "\"\\q\"", "px(1)"}) {
    try {
      parse_value(bad);
      FAIL("accepted: " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SyntaxError);
      REQUIRE(e.offset());
      CHECK(*e.offset() <= std::string_view(bad).size());
    }
  }
}

TEST_CASE("number rendering round trips") {
  Rng rng(1);
  for (int i = 0; i < 5000; ++i) {
    double x;
    switch (i % 4) {
      case 0: x = rng.uniform(-1, 1); break;
      case 1: x = std::ldexp(rng.uniform(-1, 1), int(rng.below(200)) - 100); break;
      case 2: x = double(std::int64_t(rng.next() >> 12)); break;
      default: x = std::bit_cast<double>(rng.next()); break;
    }
    if (!std::isfinite(x)) continue;
    const std::string s = format_number(x);
    CHECK(parse_value(s).as<Scalar>().value == x);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(1e21) == "1e+21");
}

TEST_CASE("render and parse are inverse") {
  const std::vector<Value> values = {
      Scalar{2.5, "m"},
      Choice{'F'},
      NormPoint2{0.1, 0.9},
      PixelPoint2{3, 4},
      Point3{-1, 0, 1e-9},
      Matrix::of(Mat4::Identity().eval()),
      Text{"line\nbreak \"quoted\" \\ tab\t"},
      Box2{0, 0, 1, 1},
      OrientedBox3::make(Vec3(1, 2, 3), Vec3(0.1, 0.2, 0.3), 1.0),
      List{{Scalar{1, {}}, Text{"x"}, List{{NormPoint2{0.5, 0.5}}}}},
  };
  for (const auto& v : values) {
    const std::string s = render_value(v);
    CHECK_MESSAGE(parse_value(s) == v, s);
    CHECK(render_value(parse_value(s)) == s);
  }
}

TEST_CASE("nesting depth is bounded") {
  std::string deep(200, '[');
  deep += std::string(200, ']');
  CHECK_TIGER_ERROR(parse_value(deep), ErrorCode::SyntaxError);
  std::string ok(30, '[');
  ok += std::string(30, ']');
  CHECK(parse_value(ok).is<List>());
}

TEST_CASE("well_typed") {
  CHECK(well_typed(NormPoint2{0, 1}));
  CHECK_FALSE(well_typed(NormPoint2{1.1, 0.5}));
  CHECK_FALSE(well_typed(Box2{2, 0, 1, 1}));
  CHECK_FALSE(well_typed(Scalar{std::numeric_limits<double>::infinity(), {}}));
  CHECK_FALSE(well_typed(List{{NormPoint2{-0.1, 0}}}));
  CHECK_FALSE(well_typed(Matrix{2, 2, {1, 2, 3}}));
  CHECK(well_typed(Matrix{2, 2, {1, 2, 3, 4}}));
}

TEST_CASE("flatten_numeric") {
  std::vector<double> out;
  CHECK(flatten_numeric(OrientedBox3::make(Vec3(1, 2, 3), Vec3(4, 5, 6), 0.5), out));
  CHECK(out == std::vector<double>{1, 2, 3, 4, 5, 6, 0.5});
  out.clear();
  CHECK(flatten_numeric(List{{Scalar{1, {}}, Point3{2, 3, 4}}}, out));
  CHECK(out.size() == 4);
  out.clear();
  CHECK_FALSE(flatten_numeric(Choice{'A'}, out));
  CHECK_FALSE(flatten_numeric(List{{Scalar{1, {}}, Text{"x"}}}, out));
}

}  // TEST_SUITE
