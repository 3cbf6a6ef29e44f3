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

#include <benchmark/benchmark.h>

#include "tiger/generator.hpp"
#include "tiger/random.hpp"
#include "tiger/raycast.hpp"

using namespace tiger;

namespace {

void BM_ProjectRoundTrip(benchmark::State& state) {
  const auto k = default_intrinsics();
  const Pose pose = Pose::look_at(Vec3(3, -2, 1.5), Vec3(0, 0, 0.5));
  const Pose inv = invert(pose);
  Rng rng(1);
  for (auto _ : state) {
    const Vec2 px(rng.uniform(0, 640), rng.uniform(0, 480));
    const Vec3 w = transform(inv, unproject(px, 3.0, k));
    benchmark::DoNotOptimize(project(w, k, pose));
  }
}
BENCHMARK(BM_ProjectRoundTrip);

void BM_ObbDistance(benchmark::State& state) {
  Rng rng(2);
  std::vector<std::pair<OrientedBox3, OrientedBox3>> pairs;
  for (int i = 0; i < 256; ++i) {
    const auto box = [&] {
      return OrientedBox3::make(Vec3(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0, 1)),
                                Vec3(rng.uniform(0.1, 0.5), rng.uniform(0.1, 0.5), rng.uniform(0.1, 0.5)),
                                rng.uniform(-kPi, kPi));
    };
    pairs.emplace_back(box(), box());
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ & 255];
    benchmark::DoNotOptimize(obb_distance(a, b));
  }
}
BENCHMARK(BM_ObbDistance);

void BM_RenderDepth(benchmark::State& state) {
  const Scene s = generate_scene(SceneParams{}, 7);
  for (auto _ : state) benchmark::DoNotOptimize(render_depth(s, 1));
}
BENCHMARK(BM_RenderDepth)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
