// Copyright 2026 The BAAS Authors
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


#include "baas/assignment.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

void BM_MinCostAssignment(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) cost(i, j) = u(rng);
  for (auto _ : state) {
    auto pairs = baas::min_cost_assignment(cost, 2.0);
    benchmark::DoNotOptimize(pairs.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MinCostAssignment)->RangeMultiplier(2)->Range(4, 128)->Complexity();

}  // namespace

BENCHMARK_MAIN();
