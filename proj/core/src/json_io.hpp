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

// Internal JSON helpers shared by the scene, reward and dataset codecs.

#include <json.hpp>

#include <string>

#include "tiger/scene.hpp"

namespace tiger::detail {

using nlohmann::json;

json scene_to_json_value(const Scene& scene);
Scene scene_from_json_value(const json& doc);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace tiger::detail
