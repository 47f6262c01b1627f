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


#pragma once

#include "baas/annotator.hpp"
#include "baas/finalizer.hpp"
#include "baas/scenario_io.hpp"
#include "baas/tracker.hpp"

#include <filesystem>
#include <vector>

namespace baas {

/// Every tunable of the pipeline in one place.
struct PipelineConfig {
  TrackerConfig tracker = TrackerConfig::defaults();
  ClassBounds bounds = ClassBounds::defaults();
  AnnotatorConfig annotator;
  /// Border functions tried by the annotate stage; empty keeps annotator.border.
  std::vector<BorderFn> border_candidates;
  double match_gate = 2.0;  // m

  static PipelineConfig defaults();
  void validate() const;
  FinalizerConfig finalizer(FinalizeOptions options = {}) const;
};

Json encode(const PipelineConfig& cfg);
/// Overlays `j` on the defaults. Unknown keys are rejected.
PipelineConfig decode_pipeline_config(const Json& j);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace baas
