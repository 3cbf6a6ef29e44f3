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

#include "tiger/minidsl.hpp"

using namespace tiger;

namespace {

void BM_Parse(benchmark::State& state) {
  const std::string src =
      "let p = xform(r3, center(r1));\nlet q = xform(r3, center(r2));\nif at(p, 0) < at(q, 0) then 0 else 1";
  const std::vector<std::string> ext = {"r1", "r2", "r3"};
  for (auto _ : state) benchmark::DoNotOptimize(dsl::parse_program(src, ext));
}
BENCHMARK(BM_Parse);

void BM_Eval(benchmark::State& state) {
  const auto prog = dsl::parse_program("let a = rotz(0.4); norm(matmul(a, vec(1, 2, 3)) - vec(3, 2, 1))");
  for (auto _ : state) benchmark::DoNotOptimize(dsl::eval(prog, {}));
}
BENCHMARK(BM_Eval);

}  // namespace

BENCHMARK_MAIN();
