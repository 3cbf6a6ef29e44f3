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

#include "tiger/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "literal_parser.hpp"
#include "tiger/error.hpp"

namespace tiger {

bool List::operator==(const List& other) const { return items == other.items; }

Matrix Matrix::of(const Mat4& m) {
  Matrix out{4, 4, {}};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out.data.push_back(m(r, c));
  }
  return out;
}

Matrix Matrix::of(const Mat3& m) {
  Matrix out{3, 3, {}};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out.data.push_back(m(r, c));
  }
  return out;
}

std::string_view to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::Placeholder: return "placeholder";
    case ValueKind::Scalar: return "scalar";
    case ValueKind::Choice: return "choice";
    case ValueKind::NormPoint2: return "point2";
    case ValueKind::PixelPoint2: return "pixel";
    case ValueKind::Point3: return "point3";
    case ValueKind::Matrix: return "matrix";
    case ValueKind::Text: return "text";
    case ValueKind::Box2: return "box2";
    case ValueKind::OrientedBox3: return "obb";
    case ValueKind::List: return "list";
  }
  return "unknown";
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void render_into(const Value& v, std::string& out);

void render_tuple(std::initializer_list<double> xs, std::string& out) {
  out += '(';
  bool first = true;
  for (double x : xs) {
    if (!first) out += ", ";
    first = false;
    out += format_number(x);
  }
  out += ')';
}

void render_text(const std::string& s, std::string& out) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", unsigned(c));
          out += buf;
        } else {
          out += char(c);
        }
    }
  }
  out += '"';
}

struct Renderer {
  std::string& out;
  void operator()(const Placeholder&) const {}
  void operator()(const Scalar& s) const {
    out += format_number(s.value);
    out += s.unit;
  }
  void operator()(const Choice& c) const { out += c.letter; }
  void operator()(const NormPoint2& p) const { render_tuple({p.x, p.y}, out); }
  void operator()(const PixelPoint2& p) const {
    out += "px";
    render_tuple({p.u, p.v}, out);
  }
  void operator()(const Point3& p) const { render_tuple({p.x, p.y, p.z}, out); }
  void operator()(const Matrix& m) const {
    out += '[';
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r) out += ", ";
      out += '[';
      for (std::size_t c = 0; c < m.cols; ++c) {
        if (c) out += ", ";
        out += format_number(m.at(r, c));
      }
      out += ']';
    }
    out += ']';
  }
  void operator()(const Text& t) const { render_text(t.text, out); }
  void operator()(const Box2& b) const {
    out += "box";
    render_tuple({b.umin, b.vmin, b.umax, b.vmax}, out);
  }
  void operator()(const OrientedBox3& b) const {
    out += "obb(center=";
    render_tuple({b.center.x(), b.center.y(), b.center.z()}, out);
    out += ", half=";
    render_tuple({b.half_extents.x(), b.half_extents.y(), b.half_extents.z()},
                 out);
    out += ", yaw=";
    out += format_number(b.yaw);
    out += ')';
  }
  void operator()(const List& l) const {
    out += '[';
    for (std::size_t i = 0; i < l.items.size(); ++i) {
      if (i) out += ", ";
      render_into(l.items[i], out);
    }
    out += ']';
  }
};

void render_into(const Value& v, std::string& out) {
  std::visit(Renderer{out}, v.variant());
}

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out += char(cp);
  } else if (cp < 0x800) {
    out += char(0xC0 | (cp >> 6));
    out += char(0x80 | (cp & 0x3F));
  } else {
    out += char(0xE0 | (cp >> 12));
    out += char(0x80 | ((cp >> 6) & 0x3F));
    out += char(0x80 | (cp & 0x3F));
  }
}

}  // namespace

std::string render_value(const Value& v) {
  std::string out;
  render_into(v, out);
  return out;
}

namespace detail {

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

void Cursor::fail(const std::string& message) const { fail_at(pos_, message); }

void Cursor::fail_at(std::size_t pos, const std::string& message) const {
  throw Error(ErrorCode::SyntaxError,
              message + " at byte " + std::to_string(pos), pos);
}

void Cursor::skip_ws() {
  while (!eof()) {
    const char c = peek();
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') break;
    ++pos_;
  }
}

bool Cursor::consume(std::string_view token) {
  if (rest().substr(0, token.size()) == token) {
    pos_ += token.size();
    return true;
  }
  return false;
}

void Cursor::expect(std::string_view token) {
  if (!consume(token)) fail("expected '" + std::string(token) + "'");
}

std::string Cursor::identifier() {
  if (!is_ident_start(peek())) fail("expected identifier");
  const std::size_t start = pos_;
  while (is_ident_char(peek())) ++pos_;
  return std::string(text_.substr(start, pos_ - start));
}

double Cursor::number() {
  const std::size_t start = pos_;
  auto digits = [&] {
    const std::size_t d0 = pos_;
    while (peek() >= '0' && peek() <= '9') ++pos_;
    return pos_ > d0;
  };
  if (peek() == '-') ++pos_;
  if (!digits()) fail_at(start, "expected number");
  if (peek() == '.') {
    ++pos_;
    if (!digits()) fail("expected digits after '.'");
  }
  if (peek() == 'e' || peek() == 'E') {
    const std::size_t save = pos_;
    ++pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    if (!digits()) pos_ = save;  // not an exponent; leave for the unit
  }
  double v = 0.0;
  const char* first = text_.data() + start;
  const char* last = text_.data() + pos_;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    fail_at(start, "number out of range");
  }
  return v;
}

std::string Cursor::quoted() {
  expect("\"");
  std::string out;
  while (true) {
    if (eof()) fail("unterminated string");
    const char c = text_[pos_++];
    if (c == '"') break;
    if (c != '\\') {
      out += c;
      continue;
    }
    if (eof()) fail("unterminated escape");
    const char e = text_[pos_++];
    switch (e) {
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case 'u': {
        unsigned cp = 0;
        for (int i = 0; i < 4; ++i) {
          const char h = peek();
          unsigned d = 0;
          if (h >= '0' && h <= '9') d = unsigned(h - '0');
          else if (h >= 'a' && h <= 'f') d = unsigned(h - 'a' + 10);
          else if (h >= 'A' && h <= 'F') d = unsigned(h - 'A' + 10);
          else fail("bad \\u escape");
          cp = cp * 16 + d;
          ++pos_;
        }
        append_utf8(out, cp);
        break;
      }
      default:
        fail_at(pos_ - 1, "unknown escape");
    }
  }
  return out;
}

namespace {

std::vector<double> number_tuple(Cursor& cur, std::size_t n) {
  cur.expect("(");
  std::vector<double> xs;
  for (std::size_t i = 0; i < n; ++i) {
    cur.skip_ws();
    if (i) {
      cur.expect(",");
      cur.skip_ws();
    }
    xs.push_back(cur.number());
  }
  cur.skip_ws();
  cur.expect(")");
  return xs;
}

}  // namespace

Value Cursor::value(int depth) {
  if (depth > 64) fail("nesting too deep");
  skip_ws();
  const std::size_t start = pos_;
  const char c = peek();
  if (c == '-' || (c >= '0' && c <= '9')) {
    Scalar s;
    s.value = number();
    while ((peek() >= 'a' && peek() <= 'z') || (peek() >= 'A' && peek() <= 'Z')) {
      s.unit += text_[pos_++];
    }
    if (is_ident_char(peek())) fail("malformed unit");
    return s;
  }
  if (c == '"') return Text{quoted()};
  if (c == '(') {
    // 2- or 3-tuple of plain numbers.
    ++pos_;
    std::vector<double> xs;
    while (true) {
      skip_ws();
      xs.push_back(number());
      skip_ws();
      if (consume(")")) break;
      expect(",");
      if (xs.size() == 3) fail("point tuples take 2 or 3 numbers");
    }
    if (xs.size() == 2) return NormPoint2{xs[0], xs[1]};
    if (xs.size() == 3) return Point3{xs[0], xs[1], xs[2]};
    fail_at(start, "point tuples take 2 or 3 numbers");
  }
  if (c == '[') {
    ++pos_;
    List list;
    skip_ws();
    if (!consume("]")) {
      while (true) {
        list.items.push_back(value(depth + 1));
        skip_ws();
        if (consume("]")) break;
        expect(",");
      }
    }
    // Non-empty rows of plain numbers with a common length form a matrix.
    bool matrix = !list.items.empty();
    std::size_t cols = 0;
    for (const auto& row : list.items) {
      const auto* l = row.get_if<List>();
      if (!l || l->items.empty()) {
        matrix = false;
        break;
      }
      if (cols == 0) cols = l->items.size();
      if (l->items.size() != cols) {
        matrix = false;
        break;
      }
      for (const auto& x : l->items) {
        const auto* s = x.get_if<Scalar>();
        if (!s || !s->unit.empty()) matrix = false;
      }
      if (!matrix) break;
    }
    if (!matrix) return list;
    Matrix m{list.items.size(), cols, {}};
    for (const auto& row : list.items) {
      for (const auto& x : row.as<List>().items) {
        m.data.push_back(x.as<Scalar>().value);
      }
    }
    return m;
  }
  if (is_ident_start(c)) {
    const std::string id = identifier();
    if (id.size() == 1 && id[0] >= 'A' && id[0] <= 'F') return Choice{id[0]};
    if (id == "px") {
      const auto xs = number_tuple(*this, 2);
      return PixelPoint2{xs[0], xs[1]};
    }
    if (id == "box") {
      const auto xs = number_tuple(*this, 4);
      return Box2{xs[0], xs[1], xs[2], xs[3]};
    }
    if (id == "obb") {
      expect("(");
      skip_ws();
      expect("center=");
      const auto center = number_tuple(*this, 3);
      skip_ws();
      expect(",");
      skip_ws();
      expect("half=");
      const auto half = number_tuple(*this, 3);
      skip_ws();
      expect(",");
      skip_ws();
      expect("yaw=");
      const double yaw = number();
      skip_ws();
      expect(")");
      OrientedBox3 b;
      b.center = Vec3(center[0], center[1], center[2]);
      b.half_extents = Vec3(half[0], half[1], half[2]);
      b.yaw = yaw;
      return b;
    }
    fail_at(start, "unknown literal '" + id + "'");
  }
  fail("expected a value");
}

}  // namespace detail

Value parse_value(std::string_view text) {
  detail::Cursor cur(text);
  Value v = cur.value();
  cur.skip_ws();
  if (!cur.eof()) cur.fail("trailing characters after value");
  return v;
}

bool flatten_numeric(const Value& v, std::vector<double>& out) {
  switch (v.kind()) {
    case ValueKind::Scalar: out.push_back(v.as<Scalar>().value); return true;
    case ValueKind::NormPoint2: {
      const auto& p = v.as<NormPoint2>();
      out.insert(out.end(), {p.x, p.y});
      return true;
    }
    case ValueKind::PixelPoint2: {
      const auto& p = v.as<PixelPoint2>();
      out.insert(out.end(), {p.u, p.v});
      return true;
    }
    case ValueKind::Point3: {
      const auto& p = v.as<Point3>();
      out.insert(out.end(), {p.x, p.y, p.z});
      return true;
    }
    case ValueKind::Matrix: {
      const auto& m = v.as<Matrix>();
      out.insert(out.end(), m.data.begin(), m.data.end());
      return true;
    }
    case ValueKind::Box2: {
      const auto& b = v.as<Box2>();
      out.insert(out.end(), {b.umin, b.vmin, b.umax, b.vmax});
      return true;
    }
    case ValueKind::OrientedBox3: {
      const auto& b = v.as<OrientedBox3>();
      out.insert(out.end(), {b.center.x(), b.center.y(), b.center.z(),
                             b.half_extents.x(), b.half_extents.y(),
                             b.half_extents.z(), b.yaw});
      return true;
    }
    case ValueKind::List: {
      for (const auto& item : v.as<List>().items) {
        if (!flatten_numeric(item, out)) return false;
      }
      return true;
    }
    default:
      return false;
  }
}

bool well_typed(const Value& v) {
  switch (v.kind()) {
    case ValueKind::Scalar: return std::isfinite(v.as<Scalar>().value);
    case ValueKind::Choice: {
      const char c = v.as<Choice>().letter;
      return c >= 'A' && c <= 'F';
    }
    case ValueKind::NormPoint2: {
      const auto& p = v.as<NormPoint2>();
      return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0;
    }
    case ValueKind::PixelPoint2: {
      const auto& p = v.as<PixelPoint2>();
      return std::isfinite(p.u) && std::isfinite(p.v);
    }
    case ValueKind::Point3: return v.as<Point3>().vec().allFinite();
    case ValueKind::Matrix: {
      const auto& m = v.as<Matrix>();
      if (m.rows == 0 || m.cols == 0 || m.data.size() != m.rows * m.cols) {
        return false;
      }
      for (double x : m.data) {
        if (!std::isfinite(x)) return false;
      }
      return true;
    }
    case ValueKind::Box2: {
      const auto& b = v.as<Box2>();
      return std::isfinite(b.umin) && std::isfinite(b.umax) &&
             std::isfinite(b.vmin) && std::isfinite(b.vmax) && b.valid();
    }
    case ValueKind::OrientedBox3: return v.as<OrientedBox3>().valid();
    case ValueKind::List: {
      for (const auto& item : v.as<List>().items) {
        if (!well_typed(item)) return false;
      }
      return true;
    }
    default:
      return true;
  }
}

}  // namespace tiger
