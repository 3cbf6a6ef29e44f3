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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tiger {

enum class ErrorCode {
  InvalidArgument,
  // geometry
  NonPositiveDepth,
  OutOfBounds,
  BehindCamera,
  DegeneratePivot,
  TooFewPoints,
  // scenes
  UnknownView,
  InfeasibleRegion,
  // trajectories
  SyntaxError,
  OrderingError,
  // tools
  UnknownTool,
  SchemaError,
  EmptyRegion,
  // minidsl
  UnboundIdentifier,
  DivisionByZero,
  TypeMismatch,
  SingularMatrix,
  LimitExceeded,
  // evaluation
  NonPositiveGroundTruth,
  // generation
  PlacementFailure,
  InsufficientScene,
  GenerationFailure,
  // io
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library. `offset()` is a byte offset into
/// the parsed text for SyntaxError/OrderingError (and minidsl parse errors);
/// `step()` is the trajectory step index for tool failures during replay.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        offset_(offset) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }
  std::optional<std::size_t> step() const noexcept { return step_; }

  Error with_step(std::size_t step) const {
    Error copy = *this;
    copy.step_ = step;
    return copy;
  }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
  std::optional<std::size_t> step_;
};

}  // namespace tiger
