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

#include <ostream>
#include <string>
#include <vector>

namespace tiger::cli {

/// Exit codes shared by every command.
enum Exit : int {
  kOk = 0,
  kConfigError = 1,  // unreadable input, parse or config error, misaligned ids
  kGenerationFailure = 2,
  kToolError = 3,
};

/// Runs `tiger <command> ...`; `args` excludes the program name. Regular
/// output goes to `out`, diagnostics and summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tiger::cli
