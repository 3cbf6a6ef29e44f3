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

#include "tiger/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "literal_parser.hpp"
#include "tiger/error.hpp"

namespace tiger {

namespace {

constexpr std::array<std::string_view, 7> kToolNames = {
    "camera_intrinsics", "camera_extrinsics",    "depth_sensor",
    "object_segmentation", "box_2d_to_box_3d", "point_3d_to_point_2d",
    "code_executor"};

[[noreturn]] void ordering_error(std::size_t offset, const std::string& msg) {
  throw Error(ErrorCode::OrderingError,
              msg + " at byte " + std::to_string(offset), offset);
}

}  // namespace

std::span<const std::string_view> tool_names() { return kToolNames; }

bool is_registered_tool(std::string_view name) {
  return std::find(kToolNames.begin(), kToolNames.end(), name) !=
         kToolNames.end();
}

const Value* ToolCall::arg(std::string_view key) const {
  for (const auto& a : args) {
    if (a.name == key) return &a.value;
  }
  return nullptr;
}

std::string_view to_string(AnswerFormat format) {
  switch (format) {
    case AnswerFormat::Choice: return "choice";
    case AnswerFormat::Scalar: return "scalar";
    case AnswerFormat::Point2: return "point2";
    case AnswerFormat::Point3: return "point3";
    case AnswerFormat::Pose: return "pose";
  }
  return "unknown";
}

std::optional<AnswerFormat> parse_answer_format(std::string_view text) {
  for (auto f : {AnswerFormat::Choice, AnswerFormat::Scalar,
                 AnswerFormat::Point2, AnswerFormat::Point3,
                 AnswerFormat::Pose}) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

std::vector<const ToolCall*> Trajectory::calls() const {
  std::vector<const ToolCall*> out;
  for (const auto& s : steps) {
    if (const auto* c = std::get_if<ToolCall>(&s)) out.push_back(c);
  }
  return out;
}

const Answer* Trajectory::answer() const {
  if (steps.empty()) return nullptr;
  return std::get_if<Answer>(&steps.back());
}

std::vector<std::size_t> Trajectory::view_ids() const {
  std::set<std::size_t> ids;
  for (const auto* c : calls()) {
    const Value* v = c->arg("view");
    if (!v) continue;
    if (const auto* s = v->get_if<Scalar>()) {
      if (s->value >= 0.0 && s->value == std::floor(s->value) &&
          s->value < 1e9) {
        ids.insert(std::size_t(s->value));
      }
    }
  }
  return {ids.begin(), ids.end()};
}

std::vector<std::string> Trajectory::unknown_tools() const {
  std::vector<std::string> out;
  for (const auto* c : calls()) {
    if (!is_registered_tool(c->name)) out.push_back(c->name);
  }
  return out;
}

namespace {

using detail::Cursor;

ToolCall parse_call_body(Cursor& cur) {
  ToolCall call;
  cur.skip_ws();
  call.name = cur.identifier();
  cur.skip_ws();
  cur.expect("(");
  cur.skip_ws();
  if (cur.consume(")")) return call;
  while (true) {
    cur.skip_ws();
    const std::size_t at = cur.pos();
    Argument arg;
    arg.name = cur.identifier();
    if (call.arg(arg.name)) cur.fail_at(at, "duplicate argument '" + arg.name + "'");
    cur.skip_ws();
    cur.expect("=");
    arg.value = cur.value();
    call.args.push_back(std::move(arg));
    cur.skip_ws();
    if (cur.consume(")")) break;
    cur.expect(",");
  }
  return call;
}

}  // namespace

Trajectory parse_trajectory(std::string_view text) {
  Cursor cur(text);
  Trajectory t;
  while (true) {
    cur.skip_ws();
    if (cur.eof()) break;
    const std::size_t start = cur.pos();
    if (t.answer()) ordering_error(start, "content after the answer");

    if (cur.consume("<think>")) {
      const std::size_t end = text.find("</think>", cur.pos());
      if (end == std::string_view::npos) cur.fail("unterminated <think>");
      t.steps.push_back(Thought{std::string(text.substr(cur.pos(), end - cur.pos()))});
      cur.set_pos(end + 8);
    } else if (cur.consume("<tool_call>")) {
      ToolCall call = parse_call_body(cur);
      cur.skip_ws();
      cur.expect("</tool_call>");
      t.steps.push_back(std::move(call));
    } else if (cur.consume("<tool_response>")) {
      if (t.steps.empty() || !std::holds_alternative<ToolCall>(t.steps.back())) {
        ordering_error(start, "tool response without a preceding call");
      }
      cur.skip_ws();
      Value v;
      if (!cur.consume("</tool_response>")) {
        v = cur.value();
        cur.skip_ws();
        cur.expect("</tool_response>");
      }
      t.steps.push_back(ToolResult{std::move(v)});
    } else if (cur.consume("<answer")) {
      if (!cur.consume(" ")) cur.fail("expected ' format='");
      cur.skip_ws();
      cur.expect("format=");
      const std::size_t at = cur.pos();
      const std::string tag = cur.identifier();
      const auto format = parse_answer_format(tag);
      if (!format) cur.fail_at(at, "unknown answer format '" + tag + "'");
      cur.skip_ws();
      cur.expect(">");
      Value v = cur.value();
      cur.skip_ws();
      cur.expect("</answer>");
      t.steps.push_back(Answer{std::move(v), *format});
    } else {
      cur.fail("expected a block tag");
    }
  }
  if (!t.answer()) ordering_error(text.size(), "trajectory has no answer");
  return t;
}

namespace {

struct StepRenderer {
  std::string& out;
  void operator()(const Thought& s) const {
    out += "<think>";
    out += s.text;
    out += "</think>";
  }
  void operator()(const ToolCall& s) const {
    out += "<tool_call>";
    out += s.name;
    out += '(';
    for (std::size_t i = 0; i < s.args.size(); ++i) {
      if (i) out += ", ";
      out += s.args[i].name;
      out += '=';
      out += render_value(s.args[i].value);
    }
    out += ")</tool_call>";
  }
  void operator()(const ToolResult& s) const {
    out += "<tool_response>";
    out += render_value(s.value);
    out += "</tool_response>";
  }
  void operator()(const Answer& s) const {
    out += "<answer format=";
    out += to_string(s.format);
    out += '>';
    out += render_value(s.value);
    out += "</answer>";
  }
};

}  // namespace

std::string render_step(const Step& step) {
  std::string out;
  std::visit(StepRenderer{out}, step);
  return out;
}

std::string render_trajectory(const Trajectory& t) {
  std::string out;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    if (i) out += '\n';
    std::visit(StepRenderer{out}, t.steps[i]);
  }
  return out;
}

bool matches_format(const Value& v, AnswerFormat format) {
  auto list_of = [&](ValueKind kind) {
    const auto* l = v.get_if<List>();
    if (!l || l->items.empty()) return false;
    return std::all_of(l->items.begin(), l->items.end(),
                       [&](const Value& x) { return x.kind() == kind; });
  };
  switch (format) {
    case AnswerFormat::Choice: return v.is<Choice>();
    case AnswerFormat::Scalar: return v.is<Scalar>();
    case AnswerFormat::Point2:
      return v.is<NormPoint2>() || list_of(ValueKind::NormPoint2);
    case AnswerFormat::Point3:
      return v.is<Point3>() || list_of(ValueKind::Point3);
    case AnswerFormat::Pose: {
      const auto* m = v.get_if<Matrix>();
      return m && m->rows == 4 && m->cols == 4;
    }
  }
  return false;
}

bool validate_format(const Trajectory& t) {
  if (t.steps.empty()) return false;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    if (const auto* r = std::get_if<ToolResult>(&s)) {
      if (i == 0) return false;
      const auto* call = std::get_if<ToolCall>(&t.steps[i - 1]);
      if (!call) return false;
      if (!well_typed(r->value)) return false;
      if (call->name == "camera_extrinsics" && !r->value.is<Placeholder>()) {
        const auto* m = r->value.get_if<Matrix>();
        if (!m || m->rows != 4 || m->cols != 4) return false;
      }
    } else if (const auto* c = std::get_if<ToolCall>(&s)) {
      for (const auto& a : c->args) {
        if (!well_typed(a.value)) return false;
      }
    } else if (const auto* a = std::get_if<Answer>(&s)) {
      if (i + 1 != t.steps.size()) return false;
      if (!well_typed(a->value) || !matches_format(a->value, a->format)) {
        return false;
      }
    }
  }
  return t.answer() != nullptr;
}

}  // namespace tiger
