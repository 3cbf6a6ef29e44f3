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

#include <doctest.h>

#include "tiger/error.hpp"
#include "tiger/generator.hpp"
#include "tiger/scene.hpp"

namespace fixtures {

// Two boxes on the floor seen by an orbit camera south of them; the chair
// is on the camera's left, the table on its right.
inline tiger::Scene two_box_scene() {
  using namespace tiger;
  Scene s;
  s.intrinsics = default_intrinsics();
  s.floor_z = 0.0;
  s.views.push_back(Pose::identity());
  s.views.push_back(Pose::look_at(Vec3(0.0, -4.0, 1.5), Vec3(0.0, 0.0, 0.4)));
  s.views.push_back(Pose::look_at(Vec3(2.0, -3.5, 1.5), Vec3(0.0, 0.0, 0.4)));
  s.objects.push_back({1, "chair", OrientedBox3::make(Vec3(-0.8, 0.0, 0.4), Vec3(0.3, 0.3, 0.4), 0.0)});
  s.objects.push_back({2, "table", OrientedBox3::make(Vec3(0.8, 0.0, 0.4), Vec3(0.4, 0.3, 0.4), 0.3)});
  s.validate();
  return s;
}

#define CHECK_TIGER_ERROR(expr, error_code)                                      \
  do {                                                                         \
    bool thrown_ = false;                                                      \
    try {                                                                      \
      (void)(expr);                                                            \
    } catch (const tiger::Error& e_) {                                         \
      thrown_ = true;                                                          \
      CHECK_MESSAGE(e_.code() == (error_code), e_.what());                     \
    }                                                                          \
    CHECK_MESSAGE(thrown_, "expected " #error_code " from " #expr);            \
  } while (0)

}  // namespace fixtures
