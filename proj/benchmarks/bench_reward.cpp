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
#include "tiger/reward.hpp"

using namespace tiger;

namespace {

void BM_ScoreSelf(benchmark::State& state) {
  DatasetConfig cfg;
  cfg.count = 32;
  const auto t = default_templates();
  for (const auto& x : t) cfg.mix.push_back({x, 1.0 / double(t.size())});
  const Dataset ds = generate_dataset(cfg);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& s = ds.samples[i++ % ds.samples.size()];
    benchmark::DoNotOptimize(score_trajectory(s.trajectory, s.trajectory, s.scene, BoxMode::Oracle));
  }
}
BENCHMARK(BM_ScoreSelf);

void BM_GrpoAdvantages(benchmark::State& state) {
  Rng rng(1);
  std::vector<double> r(std::size_t(state.range(0)));
  for (double& x : r) x = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(grpo_advantages(r));
}
BENCHMARK(BM_GrpoAdvantages)->Arg(8)->Arg(64)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
