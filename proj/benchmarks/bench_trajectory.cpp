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

std::vector<std::string> corpus() {
  DatasetConfig cfg;
  cfg.count = 64;
  cfg.seed = 3;
  const auto t = default_templates();
  for (const auto& x : t) cfg.mix.push_back({x, 1.0 / double(t.size())});
  std::vector<std::string> out;
  for (const auto& s : generate_dataset(cfg).samples) out.push_back(render_trajectory(s.trajectory));
  return out;
}

void BM_ParseTrajectory(benchmark::State& state) {
  static const auto texts = corpus();
  std::size_t i = 0, bytes = 0;
  for (auto _ : state) {
    const auto& t = texts[i++ % texts.size()];
    bytes += t.size();
    benchmark::DoNotOptimize(parse_trajectory(t));
  }
  state.SetBytesProcessed(std::int64_t(bytes));
}
BENCHMARK(BM_ParseTrajectory);

void BM_RenderTrajectory(benchmark::State& state) {
  static const auto texts = corpus();
  std::vector<Trajectory> parsed;
  for (const auto& t : texts) parsed.push_back(parse_trajectory(t));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(render_trajectory(parsed[i++ % parsed.size()]));
}
BENCHMARK(BM_RenderTrajectory);

}  // namespace

BENCHMARK_MAIN();
