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

// Tool-integrated reasoning traces.
//
//   <think>free text</think>
//   <tool_call>name(arg=value, ...)</tool_call>
//   <tool_response>value</tool_response>
//   <answer format=choice|scalar|point2|point3|pose>value</answer>
//
// Blocks may be separated by whitespace. A response must directly follow
// the call it answers; the answer is the last block. See docs/trajectory.md.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tiger/value.hpp"

namespace tiger {

struct Argument {
  std::string name;
  Value value;
  bool operator==(const Argument&) const = default;
};

struct Thought {
  std::string text;
  bool operator==(const Thought&) const = default;
};

struct ToolCall {
  std::string name;
  std::vector<Argument> args;

  const Value* arg(std::string_view key) const;
  bool operator==(const ToolCall&) const = default;
};

struct ToolResult {
  Value value;
  bool operator==(const ToolResult&) const = default;
};

enum class AnswerFormat { Choice, Scalar, Point2, Point3, Pose };

std::string_view to_string(AnswerFormat format);
std::optional<AnswerFormat> parse_answer_format(std::string_view text);

struct Answer {
  Value value;
  AnswerFormat format = AnswerFormat::Scalar;
  bool operator==(const Answer&) const = default;
};

using Step = std::variant<Thought, ToolCall, ToolResult, Answer>;

struct Trajectory {
  std::vector<Step> steps;

  std::vector<const ToolCall*> calls() const;
  const Answer* answer() const;
  /// Distinct `view` arguments over all calls, ascending.
  std::vector<std::size_t> view_ids() const;
  /// Names of calls that do not name a registered tool, in call order.
  std::vector<std::string> unknown_tools() const;

  bool operator==(const Trajectory&) const = default;
};

/// The registered tool set, in registry order.
std::span<const std::string_view> tool_names();
bool is_registered_tool(std::string_view name);

/// Throws SyntaxError or OrderingError, both carrying a byte offset.
Trajectory parse_trajectory(std::string_view text);

/// Canonical text: blocks joined by '\n', shortest round-trip numbers.
std::string render_trajectory(const Trajectory& t);
std::string render_step(const Step& step);

/// Step ordering holds, every value is well typed for its position and the
/// answer matches its declared format.
bool validate_format(const Trajectory& t);

/// True when `v` is an acceptable payload for `format`.
bool matches_format(const Value& v, AnswerFormat format);

}  // namespace tiger
