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


#include "baas/synth.hpp"
#include "baas/tracker.hpp"

#include <benchmark/benchmark.h>

namespace {

// Full tracker run over a 10 s recording; arg = object count.
void BM_RunEot(benchmark::State& state) {
  const auto s = baas::generate_scenario(baas::random_scenario(3, static_cast<int>(state.range(0)), 5.0));
  const auto cfg = baas::TrackerConfig::defaults();
  for (auto _ : state) {
    auto h = baas::run_eot(s.recording, cfg);
    benchmark::DoNotOptimize(h.tracks.data());
  }
  state.counters["scans/s"] = benchmark::Counter(static_cast<double>(s.recording.scans.size()),
                                                 benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_RunEot)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_AdaptiveCluster(benchmark::State& state) {
  const auto s = baas::generate_scenario(baas::random_scenario(5, 8, static_cast<double>(state.range(0))));
  const auto cfg = baas::TrackerConfig::defaults();
  const auto& scan = s.recording.scans[50];
  for (auto _ : state) {
    auto a = baas::adaptive_cluster(scan, {}, cfg);
    benchmark::DoNotOptimize(a.leftover.data());
  }
}
BENCHMARK(BM_AdaptiveCluster)->Arg(5)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
