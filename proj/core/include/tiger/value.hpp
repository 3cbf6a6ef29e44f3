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

// Typed value literals carried by tool calls, tool responses and answers.
//
//   12.5  12.5m          Scalar (optional unit suffix)
//   B                    Choice (A-F)
//   (0.2, 0.7)           normalized image point
//   px(320, 240)         pixel image point
//   (1, 2, 3)            3D point
//   [[1, 0], [0, 1]]     matrix (rows of plain numbers, equal length)
//   "text"               text
//   box(u0, v0, u1, v1)  2D box in pixels
//   obb(center=(x, y, z), half=(a, b, c), yaw=r)
//   [v, v, ...]          list
//
// An empty tool response body is a Placeholder.

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tiger/geometry.hpp"

namespace tiger {

struct Placeholder {
  bool operator==(const Placeholder&) const = default;
};

struct Scalar {
  double value = 0.0;
  std::string unit;
  bool operator==(const Scalar&) const = default;
};

struct Choice {
  char letter = 'A';
  bool operator==(const Choice&) const = default;
};

struct NormPoint2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const NormPoint2&) const = default;
};

struct PixelPoint2 {
  double u = 0.0;
  double v = 0.0;
  bool operator==(const PixelPoint2&) const = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Point3 of(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
  Vec3 vec() const { return Vec3(x, y, z); }
  bool operator==(const Point3&) const = default;
};

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  static Matrix of(const Mat4& m);
  static Matrix of(const Mat3& m);
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  bool operator==(const Matrix&) const = default;
};

struct Text {
  std::string text;
  bool operator==(const Text&) const = default;
};

class Value;

struct List {
  std::vector<Value> items;
  bool operator==(const List& other) const;
};

enum class ValueKind {
  Placeholder,
  Scalar,
  Choice,
  NormPoint2,
  PixelPoint2,
  Point3,
  Matrix,
  Text,
  Box2,
  OrientedBox3,
  List,
};

std::string_view to_string(ValueKind kind);

class Value {
 public:
  using Variant = std::variant<Placeholder, Scalar, Choice, NormPoint2,
                               PixelPoint2, Point3, Matrix, Text, Box2,
                               OrientedBox3, List>;

  Value() = default;
  template <typename T>
    requires std::is_constructible_v<Variant, T&&> &&
             (!std::is_same_v<std::remove_cvref_t<T>, Value>)
  Value(T&& v) : v_(std::forward<T>(v)) {}

  static Value scalar(double v, std::string unit = {}) {
    return Scalar{v, std::move(unit)};
  }
  static Value text(std::string s) { return Text{std::move(s)}; }

  ValueKind kind() const { return ValueKind(v_.index()); }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(v_);
  }
  template <typename T>
  const T& as() const {
    return std::get<T>(v_);
  }
  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }
  const Variant& variant() const { return v_; }

  bool operator==(const Value& other) const { return v_ == other.v_; }

 private:
  Variant v_;
};

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

std::string render_value(const Value& v);

/// Parses one complete value literal. Throws SyntaxError with a byte offset.
Value parse_value(std::string_view text);

/// Appends every numeric component in declaration order; false when the
/// value (or a nested item) has no numeric reading (Choice, Text,
/// Placeholder).
bool flatten_numeric(const Value& v, std::vector<double>& out);

/// Recursively checks spatial literals: normalized points inside [0,1]^2,
/// 2D boxes with positive area, oriented boxes with positive extents and a
/// normalized yaw, matrices consistent with their shape, finite numbers.
bool well_typed(const Value& v);

}  // namespace tiger
