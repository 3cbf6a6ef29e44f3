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

using namespace tiger;

namespace {

void BM_GenerateScene(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_scene(SceneParams{}, seed++));
}
BENCHMARK(BM_GenerateScene)->Unit(benchmark::kMicrosecond);

void BM_GenerateDataset(benchmark::State& state) {
  DatasetConfig cfg;
  cfg.count = 100;
  const auto t = default_templates();
  for (const auto& x : t) cfg.mix.push_back({x, 1.0 / double(t.size())});
  for (auto _ : state) benchmark::DoNotOptimize(generate_dataset(cfg, unsigned(state.range(0))));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_GenerateDataset)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
