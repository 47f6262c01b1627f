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


#include "baas/annotator.hpp"
#include "baas/finalizer.hpp"
#include "baas/session.hpp"
#include "baas/synth.hpp"

#include <benchmark/benchmark.h>

namespace {

struct Fixture {
  baas::Scenario scenario;
  std::vector<baas::ObjectTrajectory> trajectories;

  Fixture() {
    scenario = baas::generate_scenario(baas::random_scenario(4, 8, 5.0));
    const auto cfg = baas::PipelineConfig::defaults();
    const auto h = baas::run_eot(scenario.recording, cfg.tracker);
    trajectories = baas::finalize(baas::oracle_decision(h, scenario.labels), h, scenario.recording, cfg.finalizer());
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_AnnotateRecording(benchmark::State& state) {
  const Fixture& f = fixture();
  baas::AnnotatorConfig cfg;
  cfg.border = baas::BorderFn::constant(4.0);
  for (auto _ : state) {
    auto set = baas::annotate_recording(f.trajectories, f.scenario.recording, cfg);
    benchmark::DoNotOptimize(set.records.data());
  }
}
BENCHMARK(BM_AnnotateRecording)->Unit(benchmark::kMillisecond);

void BM_OptimizeBorder(benchmark::State& state) {
  const Fixture& f = fixture();
  std::vector<baas::BorderFn> grid;
  for (int i = 0; i < state.range(0); ++i) grid.push_back(baas::BorderFn::constant(0.5 * i));
  for (auto _ : state) {
    auto r = baas::optimize_border(f.scenario.labels, f.trajectories, f.scenario.recording, grid, {});
    benchmark::DoNotOptimize(r.table.data());
  }
}
BENCHMARK(BM_OptimizeBorder)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
