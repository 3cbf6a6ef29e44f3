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

// A loop-free expression language for geometric computations inside
// trajectories. Programs are a list of `let name = expr;` bindings followed
// by one result expression. See docs/minidsl.md for the grammar and the
// builtin reference.

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tiger/value.hpp"

namespace tiger::dsl {

struct EvalLimits {
  std::size_t max_steps = 100000;
  /// Upper bound on the number of numeric components created during one
  /// evaluation.
  std::size_t max_values = 1000000;
};

struct ProgramData;

class Program {
 public:
  const std::string& source() const;
  /// Number of expression nodes; evaluation never takes more steps.
  std::size_t node_count() const;
  /// Names that must be bound by the caller, in declaration order.
  const std::vector<std::string>& externals() const;

 private:
  friend Program parse_program(std::string_view,
                               std::span<const std::string>);
  friend Value eval(const Program&, const std::map<std::string, Value>&,
                    const EvalLimits&);
  std::shared_ptr<const ProgramData> data_;
};

/// `externals` lists the names the caller will bind. Throws SyntaxError
/// (with a byte offset) or UnboundIdentifier.
Program parse_program(std::string_view source,
                      std::span<const std::string> externals = {});

/// Throws DivisionByZero, TypeMismatch, SingularMatrix, LimitExceeded,
/// InvalidArgument (domain errors, non-finite results) and geometry errors
/// raised by delegated builtins. A missing binding is UnboundIdentifier.
Value eval(const Program& program, const std::map<std::string, Value>& bindings,
           const EvalLimits& limits = {});

enum class BuiltinCategory { Arithmetic, LinearAlgebra, Geometry, Construction };

struct BuiltinInfo {
  std::string_view name;
  int min_args;
  int max_args;  // -1 for variadic
  BuiltinCategory category;
  std::string_view summary;
};

/// The complete builtin table. Nothing outside this table is callable.
std::span<const BuiltinInfo> builtins();

}  // namespace tiger::dsl
