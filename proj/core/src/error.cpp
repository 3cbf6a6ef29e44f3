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

#include "tiger/error.hpp"

namespace tiger {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::BehindCamera: return "BehindCamera";
    case ErrorCode::DegeneratePivot: return "DegeneratePivot";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::UnknownView: return "UnknownView";
    case ErrorCode::InfeasibleRegion: return "InfeasibleRegion";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::OrderingError: return "OrderingError";
    case ErrorCode::UnknownTool: return "UnknownTool";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::UnboundIdentifier: return "UnboundIdentifier";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::LimitExceeded: return "LimitExceeded";
    case ErrorCode::NonPositiveGroundTruth: return "NonPositiveGroundTruth";
    case ErrorCode::PlacementFailure: return "PlacementFailure";
    case ErrorCode::InsufficientScene: return "InsufficientScene";
    case ErrorCode::GenerationFailure: return "GenerationFailure";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace tiger
