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

#include "tiger/minidsl.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "literal_parser.hpp"
#include "tiger/error.hpp"
#include "tiger/geometry.hpp"

namespace tiger::dsl {

namespace {

// Order must match kBuiltins.
enum class B {
  Norm, Dot, Cross, Matmul, Transpose, Inv3, Rotz, Abs, Min, Max, Clamp,
  Sqrt, Atan2, ObbDist, ProjectPoint, UnprojectPoint, Argmin,
  Vec, Mat, At, Row, Center, Half, Yaw, Obb, Rot, Trans, CamCenter, InvPose,
  Xform, Gravity, OrbitAngle,
};

using C = BuiltinCategory;

constexpr std::array<BuiltinInfo, 32> kBuiltins = {{
    {"norm", 1, 1, C::LinearAlgebra, "Euclidean norm of a vector; |x| of a number"},
    {"dot", 2, 2, C::LinearAlgebra, "dot product of equal-length vectors"},
    {"cross", 2, 2, C::LinearAlgebra, "cross product of 3-vectors"},
    {"matmul", 2, 2, C::LinearAlgebra, "matrix-matrix or matrix-vector product"},
    {"transpose", 1, 1, C::LinearAlgebra, "matrix transpose"},
    {"inv3", 1, 1, C::LinearAlgebra, "inverse of a 3x3 matrix"},
    {"rotz", 1, 1, C::Geometry, "3x3 rotation about +Z by an angle in radians"},
    {"abs", 1, 1, C::Arithmetic, "absolute value, elementwise on vectors"},
    {"min", 1, -1, C::Arithmetic, "minimum of numbers or of one list/vector"},
    {"max", 1, -1, C::Arithmetic, "maximum of numbers or of one list/vector"},
    {"clamp", 3, 3, C::Arithmetic, "clamp(x, lo, hi)"},
    {"sqrt", 1, 1, C::Arithmetic, "square root of a non-negative number"},
    {"atan2", 2, 2, C::Arithmetic, "atan2(y, x)"},
    {"obb_dist", 2, 2, C::Geometry, "minimum distance between two boxes"},
    {"project_point", 3, 3, C::Geometry,
     "project_point(intrinsics, pose, p): normalized image point"},
    {"unproject_point", 3, 3, C::Geometry,
     "unproject_point(intrinsics, pixel, depth): camera-frame point"},
    {"argmin", 1, 1, C::Arithmetic, "index of the first minimum"},
    {"vec", 1, -1, C::Construction, "vector from numbers"},
    {"mat", 1, -1, C::Construction, "matrix from equal-length row vectors"},
    {"at", 2, 3, C::Construction, "element of a vector/list, or matrix entry"},
    {"row", 2, 2, C::Construction, "matrix row as a vector"},
    {"center", 1, 1, C::Geometry, "box center"},
    {"half", 1, 1, C::Geometry, "box half extents"},
    {"yaw", 1, 1, C::Geometry, "box yaw"},
    {"obb", 3, 3, C::Construction, "obb(center, half_extents, yaw)"},
    {"rot", 1, 1, C::Geometry, "rotation block of a 4x4 pose"},
    {"trans", 1, 1, C::Geometry, "translation of a 4x4 pose"},
    {"cam_center", 1, 1, C::Geometry, "camera center of a 4x4 pose in world"},
    {"inv_pose", 1, 1, C::Geometry, "inverse of a 4x4 rigid pose"},
    {"xform", 2, 2, C::Geometry, "apply a 4x4 pose to a 3D point"},
    {"gravity", 1, 1, C::Geometry, "world gravity in the camera frame of a pose"},
    {"orbit_angle", 3, 3, C::Geometry,
     "signed orbit angle about +Z between two poses around a pivot"},
}};

constexpr int kMaxDepth = 200;

enum class Op {
  Num, Bool, Slot, Call, List, Neg, Not,
  Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or, If,
};

struct Node {
  Op op = Op::Num;
  double num = 0.0;
  int index = 0;  // slot or builtin
  std::vector<int> kids;
  std::size_t offset = 0;
};

}  // namespace

struct ProgramData {
  std::string source;
  std::vector<Node> nodes;
  std::vector<std::string> externals;
  std::vector<std::pair<int, int>> lets;  // (slot, node)
  int result = -1;
  int slots = 0;
};

const std::string& Program::source() const { return data_->source; }
std::size_t Program::node_count() const { return data_->nodes.size(); }
const std::vector<std::string>& Program::externals() const {
  return data_->externals;
}

std::span<const BuiltinInfo> builtins() { return kBuiltins; }

namespace {

bool is_keyword(std::string_view s) {
  static constexpr std::string_view kWords[] = {
      "let", "if", "then", "else", "and", "or", "not", "true", "false"};
  return std::find(std::begin(kWords), std::end(kWords), s) != std::end(kWords);
}

class Parser {
 public:
  Parser(ProgramData& data, std::string_view text) : d_(data), cur_(text) {}

  void program() {
    for (const auto& name : d_.externals) declare(name);
    while (true) {
      ws();
      const std::size_t save = cur_.pos();
      if (word("let")) {
        ws();
        const std::size_t at = cur_.pos();
        const std::string name = cur_.identifier();
        if (is_keyword(name)) cur_.fail_at(at, "keyword used as a name");
        ws();
        cur_.expect("=");
        const int e = expr(0);
        ws();
        cur_.expect(";");
        d_.lets.emplace_back(declare(name), e);
        continue;
      }
      cur_.set_pos(save);
      break;
    }
    d_.result = expr(0);
    ws();
    cur_.consume(";");
    ws();
    if (!cur_.eof()) cur_.fail("unexpected trailing input");
  }

 private:
  int declare(const std::string& name) {
    scope_.emplace_back(name, d_.slots);
    return d_.slots++;
  }

  std::optional<int> lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    return std::nullopt;
  }

  void ws() {
    while (true) {
      cur_.skip_ws();
      if (cur_.peek() != '#') return;
      while (!cur_.eof() && cur_.peek() != '\n') cur_.set_pos(cur_.pos() + 1);
    }
  }

  bool word(std::string_view w) {
    if (cur_.rest().substr(0, w.size()) != w) return false;
    if (detail::is_ident_char(cur_.peek(w.size()))) return false;
    cur_.set_pos(cur_.pos() + w.size());
    return true;
  }

  int node(Op op, std::size_t offset, std::vector<int> kids = {}) {
    Node n;
    n.op = op;
    n.offset = offset;
    n.kids = std::move(kids);
    d_.nodes.push_back(std::move(n));
    return int(d_.nodes.size()) - 1;
  }

  void enter(int depth) {
    if (depth > kMaxDepth) cur_.fail("expression nested too deeply");
  }

  int expr(int depth) {
    enter(depth);
    ws();
    const std::size_t at = cur_.pos();
    if (word("if")) {
      const int c = expr(depth + 1);
      ws();
      if (!word("then")) cur_.fail("expected 'then'");
      const int a = expr(depth + 1);
      ws();
      if (!word("else")) cur_.fail("expected 'else'");
      const int b = expr(depth + 1);
      return node(Op::If, at, {c, a, b});
    }
    return disjunction(depth + 1);
  }

  int disjunction(int depth) {
    enter(depth);
    int lhs = conjunction(depth + 1);
    while (true) {
      ws();
      const std::size_t at = cur_.pos();
      if (!word("or")) return lhs;
      lhs = node(Op::Or, at, {lhs, conjunction(depth + 1)});
    }
  }

  int conjunction(int depth) {
    enter(depth);
    int lhs = negation(depth + 1);
    while (true) {
      ws();
      const std::size_t at = cur_.pos();
      if (!word("and")) return lhs;
      lhs = node(Op::And, at, {lhs, negation(depth + 1)});
    }
  }

  int negation(int depth) {
    enter(depth);
    ws();
    const std::size_t at = cur_.pos();
    if (word("not")) return node(Op::Not, at, {negation(depth + 1)});
    return comparison(depth + 1);
  }

  int comparison(int depth) {
    enter(depth);
    const int lhs = additive(depth + 1);
    ws();
    const std::size_t at = cur_.pos();
    static constexpr std::pair<std::string_view, Op> kOps[] = {
        {"<=", Op::Le}, {">=", Op::Ge}, {"==", Op::Eq},
        {"!=", Op::Ne}, {"<", Op::Lt},  {">", Op::Gt}};
    for (const auto& [tok, op] : kOps) {
      if (cur_.consume(tok)) return node(op, at, {lhs, additive(depth + 1)});
    }
    return lhs;
  }

  int additive(int depth) {
    enter(depth);
    int lhs = multiplicative(depth + 1);
    while (true) {
      ws();
      const std::size_t at = cur_.pos();
      if (cur_.consume("+")) {
        lhs = node(Op::Add, at, {lhs, multiplicative(depth + 1)});
      } else if (cur_.consume("-")) {
        lhs = node(Op::Sub, at, {lhs, multiplicative(depth + 1)});
      } else {
        return lhs;
      }
    }
  }

  int multiplicative(int depth) {
    enter(depth);
    int lhs = unary(depth + 1);
    while (true) {
      ws();
      const std::size_t at = cur_.pos();
      if (cur_.consume("*")) {
        lhs = node(Op::Mul, at, {lhs, unary(depth + 1)});
      } else if (cur_.consume("/")) {
        lhs = node(Op::Div, at, {lhs, unary(depth + 1)});
      } else {
        return lhs;
      }
    }
  }

  int unary(int depth) {
    enter(depth);
    ws();
    const std::size_t at = cur_.pos();
    if (cur_.consume("-")) return node(Op::Neg, at, {unary(depth + 1)});
    return primary(depth + 1);
  }

  std::vector<int> arguments(char close, int depth) {
    std::vector<int> kids;
    ws();
    if (cur_.consume(std::string_view(&close, 1))) return kids;
    while (true) {
      kids.push_back(expr(depth + 1));
      ws();
      if (cur_.consume(std::string_view(&close, 1))) return kids;
      cur_.expect(",");
    }
  }

  int primary(int depth) {
    enter(depth);
    ws();
    const std::size_t at = cur_.pos();
    const char c = cur_.peek();
    if (c >= '0' && c <= '9') {
      const int n = node(Op::Num, at);
      d_.nodes[n].num = cur_.number();
      if (detail::is_ident_char(cur_.peek())) cur_.fail("malformed number");
      return n;
    }
    if (c == '(') {
      cur_.consume("(");
      const int e = expr(depth + 1);
      ws();
      cur_.expect(")");
      return e;
    }
    if (c == '[') {
      cur_.consume("[");
      return node(Op::List, at, arguments(']', depth));
    }
    if (!detail::is_ident_start(c)) cur_.fail("expected an expression");
    const std::string name = cur_.identifier();
    if (name == "true" || name == "false") {
      const int n = node(Op::Bool, at);
      d_.nodes[n].num = name == "true" ? 1.0 : 0.0;
      return n;
    }
    if (is_keyword(name)) cur_.fail_at(at, "unexpected keyword '" + name + "'");
    ws();
    if (cur_.peek() == '(') {
      const auto it = std::find_if(kBuiltins.begin(), kBuiltins.end(),
                                   [&](const BuiltinInfo& b) { return b.name == name; });
      if (it == kBuiltins.end()) {
        throw Error(ErrorCode::UnboundIdentifier,
                    "unknown function '" + name + "' at byte " + std::to_string(at), at);
      }
      cur_.consume("(");
      auto kids = arguments(')', depth);
      const int argc = int(kids.size());
      if (argc < it->min_args || (it->max_args >= 0 && argc > it->max_args)) {
        cur_.fail_at(at, "wrong number of arguments to '" + name + "'");
      }
      const int n = node(Op::Call, at, std::move(kids));
      d_.nodes[n].index = int(it - kBuiltins.begin());
      return n;
    }
    const auto slot = lookup(name);
    if (!slot) {
      throw Error(ErrorCode::UnboundIdentifier,
                  "unbound identifier '" + name + "' at byte " + std::to_string(at), at);
    }
    const int n = node(Op::Slot, at);
    d_.nodes[n].index = *slot;
    return n;
  }

  ProgramData& d_;
  detail::Cursor cur_;
  std::vector<std::pair<std::string, int>> scope_;
};

// ---------------------------------------------------------------------------
// Evaluation

struct DValue {
  enum class Kind { Num, Bool, Vec, Mat, Box, List };
  Kind kind = Kind::Num;
  double num = 0.0;
  Eigen::VectorXd vec;
  Eigen::MatrixXd mat;
  OrientedBox3 box;
  std::vector<DValue> list;

  static DValue number(double x) {
    DValue v;
    v.num = x;
    return v;
  }
  static DValue boolean(bool b) {
    DValue v;
    v.kind = Kind::Bool;
    v.num = b ? 1.0 : 0.0;
    return v;
  }
  static DValue vector(Eigen::VectorXd x) {
    DValue v;
    v.kind = Kind::Vec;
    v.vec = std::move(x);
    return v;
  }
  static DValue matrix(Eigen::MatrixXd x) {
    DValue v;
    v.kind = Kind::Mat;
    v.mat = std::move(x);
    return v;
  }
  static DValue oriented_box(const OrientedBox3& b) {
    DValue v;
    v.kind = Kind::Box;
    v.box = b;
    return v;
  }

  std::size_t size() const {
    switch (kind) {
      case Kind::Vec: return std::size_t(vec.size());
      case Kind::Mat: return std::size_t(mat.size());
      case Kind::Box: return 7;
      case Kind::List: {
        std::size_t n = 1;
        for (const auto& x : list) n += x.size();
        return n;
      }
      default: return 1;
    }
  }
};

const char* kind_name(DValue::Kind k) {
  switch (k) {
    case DValue::Kind::Num: return "number";
    case DValue::Kind::Bool: return "bool";
    case DValue::Kind::Vec: return "vector";
    case DValue::Kind::Mat: return "matrix";
    case DValue::Kind::Box: return "box";
    case DValue::Kind::List: return "list";
  }
  return "?";
}

[[noreturn]] void mismatch(const std::string& what, std::size_t offset) {
  throw Error(ErrorCode::TypeMismatch,
              what + " at byte " + std::to_string(offset), offset);
}

[[noreturn]] void domain(const std::string& what, std::size_t offset) {
  throw Error(ErrorCode::InvalidArgument,
              what + " at byte " + std::to_string(offset), offset);
}

DValue from_value(const Value& v, const std::string& name) {
  switch (v.kind()) {
    case ValueKind::Scalar: return DValue::number(v.as<Scalar>().value);
    case ValueKind::NormPoint2: {
      const auto& p = v.as<NormPoint2>();
      return DValue::vector(Eigen::Vector2d(p.x, p.y));
    }
    case ValueKind::PixelPoint2: {
      const auto& p = v.as<PixelPoint2>();
      return DValue::vector(Eigen::Vector2d(p.u, p.v));
    }
    case ValueKind::Point3: return DValue::vector(v.as<Point3>().vec());
    case ValueKind::Matrix: {
      const auto& m = v.as<Matrix>();
      Eigen::MatrixXd out(Eigen::Index(m.rows), Eigen::Index(m.cols));
      for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) out(Eigen::Index(r), Eigen::Index(c)) = m.at(r, c);
      }
      return DValue::matrix(std::move(out));
    }
    case ValueKind::Box2: {
      const auto& b = v.as<Box2>();
      return DValue::vector(Eigen::Vector4d(b.umin, b.vmin, b.umax, b.vmax));
    }
    case ValueKind::OrientedBox3: return DValue::oriented_box(v.as<OrientedBox3>());
    case ValueKind::List: {
      DValue out;
      out.kind = DValue::Kind::List;
      for (const auto& item : v.as<List>().items) out.list.push_back(from_value(item, name));
      return out;
    }
    default:
      throw Error(ErrorCode::TypeMismatch,
                  "binding '" + name + "' holds a " + std::string(to_string(v.kind())) +
                      ", which has no numeric reading");
  }
}

bool all_finite(const DValue& v) {
  switch (v.kind) {
    case DValue::Kind::Num: return std::isfinite(v.num);
    case DValue::Kind::Bool: return true;
    case DValue::Kind::Vec: return v.vec.allFinite();
    case DValue::Kind::Mat: return v.mat.allFinite();
    case DValue::Kind::Box:
      return v.box.center.allFinite() && v.box.half_extents.allFinite() &&
             std::isfinite(v.box.yaw);
    case DValue::Kind::List:
      return std::all_of(v.list.begin(), v.list.end(), all_finite);
  }
  return false;
}

Value to_value(const DValue& v) {
  switch (v.kind) {
    case DValue::Kind::Num: return Scalar{v.num, {}};
    case DValue::Kind::Bool: return Scalar{v.num, {}};
    case DValue::Kind::Vec: {
      if (v.vec.size() == 2) return NormPoint2{v.vec[0], v.vec[1]};
      if (v.vec.size() == 3) return Point3{v.vec[0], v.vec[1], v.vec[2]};
      List out;
      for (Eigen::Index i = 0; i < v.vec.size(); ++i) out.items.push_back(Scalar{v.vec[i], {}});
      return out;
    }
    case DValue::Kind::Mat: {
      Matrix m{std::size_t(v.mat.rows()), std::size_t(v.mat.cols()), {}};
      for (Eigen::Index r = 0; r < v.mat.rows(); ++r) {
        for (Eigen::Index c = 0; c < v.mat.cols(); ++c) m.data.push_back(v.mat(r, c));
      }
      return m;
    }
    case DValue::Kind::Box: return v.box;
    case DValue::Kind::List: {
      List out;
      for (const auto& x : v.list) out.items.push_back(to_value(x));
      return out;
    }
  }
  return Placeholder{};
}

class Evaluator {
 public:
  Evaluator(const ProgramData& d, const EvalLimits& limits)
      : d_(d), limits_(limits), slots_(std::size_t(d.slots)) {}

  std::vector<std::optional<DValue>>& slots() { return slots_; }

  DValue run() {
    for (const auto& [slot, e] : d_.lets) slots_[std::size_t(slot)] = eval(e);
    return eval(d_.result);
  }

 private:
  const Node& at(int n) const { return d_.nodes[std::size_t(n)]; }

  void tick(const Node& n) {
    if (++steps_ > limits_.max_steps) {
      throw Error(ErrorCode::LimitExceeded,
                  "step limit exceeded at byte " + std::to_string(n.offset), n.offset);
    }
  }

  DValue produce(DValue v, const Node& n) {
    values_ += v.size();
    if (values_ > limits_.max_values) {
      throw Error(ErrorCode::LimitExceeded,
                  "value limit exceeded at byte " + std::to_string(n.offset), n.offset);
    }
    return v;
  }

  double number(const DValue& v, const Node& n) {
    if (v.kind != DValue::Kind::Num) mismatch(std::string("expected a number, got ") + kind_name(v.kind), n.offset);
    return v.num;
  }

  bool truth(const DValue& v, const Node& n) {
    if (v.kind != DValue::Kind::Bool) mismatch(std::string("expected a bool, got ") + kind_name(v.kind), n.offset);
    return v.num != 0.0;
  }

  // Vectors, or lists of plain numbers.
  Eigen::VectorXd vector(const DValue& v, const Node& n) {
    if (v.kind == DValue::Kind::Vec) return v.vec;
    if (v.kind == DValue::Kind::List) {
      Eigen::VectorXd out(Eigen::Index(v.list.size()));
      for (std::size_t i = 0; i < v.list.size(); ++i) out[Eigen::Index(i)] = number(v.list[i], n);
      return out;
    }
    mismatch(std::string("expected a vector, got ") + kind_name(v.kind), n.offset);
  }

  Vec3 vec3(const DValue& v, const Node& n) {
    const Eigen::VectorXd x = vector(v, n);
    if (x.size() != 3) mismatch("expected a 3-vector", n.offset);
    return x;
  }

  const Eigen::MatrixXd& matrix(const DValue& v, const Node& n) {
    if (v.kind != DValue::Kind::Mat) mismatch(std::string("expected a matrix, got ") + kind_name(v.kind), n.offset);
    return v.mat;
  }

  const OrientedBox3& box(const DValue& v, const Node& n) {
    if (v.kind != DValue::Kind::Box) mismatch(std::string("expected a box, got ") + kind_name(v.kind), n.offset);
    return v.box;
  }

  Pose pose(const DValue& v, const Node& n) {
    const auto& m = matrix(v, n);
    if (m.rows() != 4 || m.cols() != 4) mismatch("expected a 4x4 pose", n.offset);
    return Pose::from_matrix(Mat4(m));
  }

  CameraIntrinsics intrinsics(const DValue& v, const Node& n) {
    const Eigen::VectorXd x = vector(v, n);
    if (x.size() != 6) mismatch("intrinsics are [fx, fy, cx, cy, width, height]", n.offset);
    CameraIntrinsics k{x[0], x[1], x[2], x[3], int(x[4]), int(x[5])};
    if (double(k.width) != x[4] || double(k.height) != x[5]) domain("image size must be integral", n.offset);
    k.validate();
    return k;
  }

  std::size_t index(const DValue& v, std::size_t size, const Node& n) {
    const double i = number(v, n);
    if (!(i >= 0.0) || i != std::floor(i) || i >= double(size)) domain("index out of range", n.offset);
    return std::size_t(i);
  }

  DValue reduce(const Node& n, std::vector<DValue>& args, bool want_max) {
    std::vector<double> xs;
    if (args.size() == 1 && args[0].kind != DValue::Kind::Num) {
      const Eigen::VectorXd v = vector(args[0], n);
      xs.assign(v.data(), v.data() + v.size());
    } else {
      for (const auto& a : args) xs.push_back(number(a, n));
    }
    if (xs.empty()) domain("empty argument list", n.offset);
    return DValue::number(want_max ? *std::max_element(xs.begin(), xs.end())
                                   : *std::min_element(xs.begin(), xs.end()));
  }

  DValue call(const Node& n, std::vector<DValue>& a) {
    switch (B(n.index)) {
      case B::Norm:
        if (a[0].kind == DValue::Kind::Num) return DValue::number(std::abs(a[0].num));
        return DValue::number(vector(a[0], n).norm());
      case B::Dot: {
        const auto x = vector(a[0], n), y = vector(a[1], n);
        if (x.size() != y.size()) mismatch("dot of vectors with different sizes", n.offset);
        return DValue::number(x.dot(y));
      }
      case B::Cross: return DValue::vector(vec3(a[0], n).cross(vec3(a[1], n)));
      case B::Matmul: {
        const auto& x = matrix(a[0], n);
        if (a[1].kind == DValue::Kind::Mat) {
          if (x.cols() != a[1].mat.rows()) mismatch("matmul shape mismatch", n.offset);
          return DValue::matrix(x * a[1].mat);
        }
        const auto y = vector(a[1], n);
        if (x.cols() != y.size()) mismatch("matmul shape mismatch", n.offset);
        return DValue::vector(x * y);
      }
      case B::Transpose: return DValue::matrix(matrix(a[0], n).transpose());
      case B::Inv3: {
        const auto& m = matrix(a[0], n);
        if (m.rows() != 3 || m.cols() != 3) mismatch("inv3 needs a 3x3 matrix", n.offset);
        const Mat3 m3 = m;
        const double scale = std::max(1.0, m3.cwiseAbs().maxCoeff());
        const double det = m3.determinant();
        if (!(std::abs(det) > 1e-12 * scale * scale * scale)) {
          throw Error(ErrorCode::SingularMatrix,
                      "matrix is singular at byte " + std::to_string(n.offset), n.offset);
        }
        return DValue::matrix(m3.inverse());
      }
      case B::Rotz: {
        const double t = number(a[0], n);
        return DValue::matrix(Eigen::AngleAxisd(t, Vec3::UnitZ()).toRotationMatrix());
      }
      case B::Abs:
        if (a[0].kind == DValue::Kind::Num) return DValue::number(std::abs(a[0].num));
        return DValue::vector(vector(a[0], n).cwiseAbs());
      case B::Min: return reduce(n, a, false);
      case B::Max: return reduce(n, a, true);
      case B::Clamp: {
        const double x = number(a[0], n), lo = number(a[1], n), hi = number(a[2], n);
        if (!(lo <= hi)) domain("clamp needs lo <= hi", n.offset);
        return DValue::number(std::clamp(x, lo, hi));
      }
      case B::Sqrt: {
        const double x = number(a[0], n);
        if (x < 0.0) domain("sqrt of a negative number", n.offset);
        return DValue::number(std::sqrt(x));
      }
      case B::Atan2: return DValue::number(std::atan2(number(a[0], n), number(a[1], n)));
      case B::ObbDist: return DValue::number(obb_distance(box(a[0], n), box(a[1], n)));
      case B::ProjectPoint: {
        const auto k = intrinsics(a[0], n);
        const Projection p = project(vec3(a[2], n), k, pose(a[1], n));
        return DValue::vector(p.normalized);
      }
      case B::UnprojectPoint: {
        const auto k = intrinsics(a[0], n);
        const auto uv = vector(a[1], n);
        if (uv.size() != 2) mismatch("expected a pixel (u, v)", n.offset);
        return DValue::vector(unproject(Vec2(uv), number(a[2], n), k));
      }
      case B::Argmin: {
        const auto x = vector(a[0], n);
        if (x.size() == 0) domain("argmin of an empty list", n.offset);
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < x.size(); ++i) {
          if (x[i] < x[best]) best = i;
        }
        return DValue::number(double(best));
      }
      case B::Vec: {
        Eigen::VectorXd out(Eigen::Index(a.size()));
        for (std::size_t i = 0; i < a.size(); ++i) out[Eigen::Index(i)] = number(a[i], n);
        return DValue::vector(std::move(out));
      }
      case B::Mat: {
        std::vector<Eigen::VectorXd> rows;
        for (const auto& r : a) rows.push_back(vector(r, n));
        const auto cols = rows.front().size();
        if (cols == 0) mismatch("matrix rows must be non-empty", n.offset);
        Eigen::MatrixXd out(Eigen::Index(rows.size()), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].size() != cols) mismatch("matrix rows differ in length", n.offset);
          out.row(Eigen::Index(i)) = rows[i].transpose();
        }
        return DValue::matrix(std::move(out));
      }
      case B::At: {
        if (a.size() == 3) {
          const auto& m = matrix(a[0], n);
          const auto r = index(a[1], std::size_t(m.rows()), n);
          const auto c = index(a[2], std::size_t(m.cols()), n);
          return DValue::number(m(Eigen::Index(r), Eigen::Index(c)));
        }
        if (a[0].kind == DValue::Kind::List) {
          return a[0].list[index(a[1], a[0].list.size(), n)];
        }
        const auto x = vector(a[0], n);
        return DValue::number(x[Eigen::Index(index(a[1], std::size_t(x.size()), n))]);
      }
      case B::Row: {
        const auto& m = matrix(a[0], n);
        const auto r = index(a[1], std::size_t(m.rows()), n);
        return DValue::vector(m.row(Eigen::Index(r)).transpose());
      }
      case B::Center: return DValue::vector(box(a[0], n).center);
      case B::Half: return DValue::vector(box(a[0], n).half_extents);
      case B::Yaw: return DValue::number(box(a[0], n).yaw);
      case B::Obb: {
        const Vec3 c = vec3(a[0], n), h = vec3(a[1], n);
        const double yaw = number(a[2], n);
        if (!(h.minCoeff() > 0.0) || !c.allFinite() || !std::isfinite(yaw)) {
          domain("box needs finite values and positive half extents", n.offset);
        }
        return DValue::oriented_box(OrientedBox3::make(c, h, yaw));
      }
      case B::Rot: return DValue::matrix(pose(a[0], n).rotation());
      case B::Trans: return DValue::vector(pose(a[0], n).translation());
      case B::CamCenter: return DValue::vector(pose(a[0], n).center());
      case B::InvPose: return DValue::matrix(invert(pose(a[0], n)).matrix());
      case B::Xform: return DValue::vector(transform(pose(a[0], n), vec3(a[1], n)));
      case B::Gravity: return DValue::vector(gravity_direction(pose(a[0], n)));
      case B::OrbitAngle:
        return DValue::number(
            relative_camera_motion(pose(a[0], n), pose(a[1], n), vec3(a[2], n)).angle);
    }
    mismatch("unknown builtin", n.offset);
  }

  DValue arith(const Node& n, const DValue& x, const DValue& y) {
    using K = DValue::Kind;
    switch (n.op) {
      case Op::Add:
      case Op::Sub: {
        const double s = n.op == Op::Add ? 1.0 : -1.0;
        if (x.kind == K::Num && y.kind == K::Num) return DValue::number(x.num + s * y.num);
        if (x.kind == K::Vec && y.kind == K::Vec && x.vec.size() == y.vec.size()) {
          return DValue::vector(x.vec + s * y.vec);
        }
        if (x.kind == K::Mat && y.kind == K::Mat && x.mat.rows() == y.mat.rows() &&
            x.mat.cols() == y.mat.cols()) {
          return DValue::matrix(x.mat + s * y.mat);
        }
        break;
      }
      case Op::Mul:
        if (x.kind == K::Num && y.kind == K::Num) return DValue::number(x.num * y.num);
        if (x.kind == K::Num && y.kind == K::Vec) return DValue::vector(x.num * y.vec);
        if (x.kind == K::Vec && y.kind == K::Num) return DValue::vector(x.vec * y.num);
        if (x.kind == K::Num && y.kind == K::Mat) return DValue::matrix(x.num * y.mat);
        if (x.kind == K::Mat && y.kind == K::Num) return DValue::matrix(x.mat * y.num);
        break;
      case Op::Div:
        if (y.kind == K::Num) {
          if (y.num == 0.0) {
            throw Error(ErrorCode::DivisionByZero,
                        "division by zero at byte " + std::to_string(n.offset), n.offset);
          }
          if (x.kind == K::Num) return DValue::number(x.num / y.num);
          if (x.kind == K::Vec) return DValue::vector(x.vec / y.num);
          if (x.kind == K::Mat) return DValue::matrix(x.mat / y.num);
        }
        break;
      default:
        break;
    }
    mismatch(std::string("cannot combine ") + kind_name(x.kind) + " and " + kind_name(y.kind),
             n.offset);
  }

  DValue compare(const Node& n, const DValue& x, const DValue& y) {
    const bool boolean = x.kind == DValue::Kind::Bool && y.kind == DValue::Kind::Bool;
    if (boolean && (n.op == Op::Eq || n.op == Op::Ne)) {
      return DValue::boolean((x.num == y.num) == (n.op == Op::Eq));
    }
    const double a = number(x, n), b = number(y, n);
    switch (n.op) {
      case Op::Lt: return DValue::boolean(a < b);
      case Op::Le: return DValue::boolean(a <= b);
      case Op::Gt: return DValue::boolean(a > b);
      case Op::Ge: return DValue::boolean(a >= b);
      case Op::Eq: return DValue::boolean(a == b);
      default: return DValue::boolean(a != b);
    }
  }

  DValue list(const Node& n, std::vector<DValue> items) {
    // Rows of plain numbers with a common length form a matrix.
    bool matrix = !items.empty();
    Eigen::Index cols = -1;
    for (const auto& it : items) {
      if (it.kind != DValue::Kind::List || it.list.empty()) {
        matrix = false;
        break;
      }
      if (cols < 0) cols = Eigen::Index(it.list.size());
      if (Eigen::Index(it.list.size()) != cols) matrix = false;
      for (const auto& x : it.list) {
        if (x.kind != DValue::Kind::Num) matrix = false;
      }
      if (!matrix) break;
    }
    if (matrix) {
      Eigen::MatrixXd m(Eigen::Index(items.size()), cols);
      for (std::size_t r = 0; r < items.size(); ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(Eigen::Index(r), c) = items[r].list[std::size_t(c)].num;
      }
      return DValue::matrix(std::move(m));
    }
    (void)n;
    DValue out;
    out.kind = DValue::Kind::List;
    out.list = std::move(items);
    return out;
  }

  DValue eval(int id) {
    const Node& n = at(id);
    tick(n);
    switch (n.op) {
      case Op::Num: return produce(DValue::number(n.num), n);
      case Op::Bool: return produce(DValue::boolean(n.num != 0.0), n);
      case Op::Slot: {
        const auto& v = slots_[std::size_t(n.index)];
        if (!v) throw Error(ErrorCode::UnboundIdentifier, "binding missing at evaluation", n.offset);
        return *v;
      }
      case Op::Call: {
        std::vector<DValue> args;
        args.reserve(n.kids.size());
        for (int k : n.kids) args.push_back(eval(k));
        return produce(call(n, args), n);
      }
      case Op::List: {
        std::vector<DValue> items;
        for (int k : n.kids) items.push_back(eval(k));
        return produce(list(n, std::move(items)), n);
      }
      case Op::Neg: {
        DValue v = eval(n.kids[0]);
        switch (v.kind) {
          case DValue::Kind::Num: v.num = -v.num; break;
          case DValue::Kind::Vec: v.vec = -v.vec; break;
          case DValue::Kind::Mat: v.mat = -v.mat; break;
          default: mismatch(std::string("cannot negate a ") + kind_name(v.kind), n.offset);
        }
        return produce(std::move(v), n);
      }
      case Op::Not: return produce(DValue::boolean(!truth(eval(n.kids[0]), n)), n);
      case Op::And: {
        if (!truth(eval(n.kids[0]), n)) return produce(DValue::boolean(false), n);
        return produce(DValue::boolean(truth(eval(n.kids[1]), n)), n);
      }
      case Op::Or: {
        if (truth(eval(n.kids[0]), n)) return produce(DValue::boolean(true), n);
        return produce(DValue::boolean(truth(eval(n.kids[1]), n)), n);
      }
      case Op::If:
        return truth(eval(n.kids[0]), n) ? eval(n.kids[1]) : eval(n.kids[2]);
      case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge: case Op::Eq: case Op::Ne: {
        const DValue x = eval(n.kids[0]);
        const DValue y = eval(n.kids[1]);
        return produce(compare(n, x, y), n);
      }
      default: {
        const DValue x = eval(n.kids[0]);
        const DValue y = eval(n.kids[1]);
        return produce(arith(n, x, y), n);
      }
    }
  }

  const ProgramData& d_;
  const EvalLimits& limits_;
  std::vector<std::optional<DValue>> slots_;
  std::size_t steps_ = 0;
  std::size_t values_ = 0;
};

}  // namespace

Program parse_program(std::string_view source,
                      std::span<const std::string> externals) {
  auto data = std::make_shared<ProgramData>();
  data->source = std::string(source);
  for (const auto& name : externals) {
    if (name.empty() || !detail::is_ident_start(name[0]) ||
        !std::all_of(name.begin(), name.end(), detail::is_ident_char) ||
        is_keyword(name)) {
      throw Error(ErrorCode::InvalidArgument, "invalid external name '" + name + "'");
    }
    data->externals.push_back(name);
  }
  Parser parser(*data, data->source);
  parser.program();
  Program p;
  p.data_ = std::move(data);
  return p;
}

Value eval(const Program& program, const std::map<std::string, Value>& bindings,
           const EvalLimits& limits) {
  if (limits.max_steps == 0 || limits.max_values == 0) {
    throw Error(ErrorCode::InvalidArgument, "evaluation limits must be positive");
  }
  const ProgramData& d = *program.data_;
  Evaluator ev(d, limits);
  // Externals occupy the first slots; a later duplicate shadows an earlier one.
  for (std::size_t i = 0; i < d.externals.size(); ++i) {
    const auto it = bindings.find(d.externals[i]);
    if (it == bindings.end()) {
      throw Error(ErrorCode::UnboundIdentifier,
                  "no binding supplied for '" + d.externals[i] + "'");
    }
    ev.slots()[i] = from_value(it->second, d.externals[i]);
  }
  const DValue out = ev.run();
  if (!all_finite(out)) {
    throw Error(ErrorCode::InvalidArgument, "program produced a non-finite result");
  }
  return to_value(out);
}

}  // namespace tiger::dsl
