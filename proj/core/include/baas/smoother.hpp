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

#include "baas/filter.hpp"
#include "baas/tracker.hpp"
#include "baas/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace baas {

/// Detections attributed to one object at one scan. Frames without
/// detections are coasted.
struct MeasurementFrame {
  std::int64_t k = 0;
  double t = 0.0;
  EgoPose ego;
  std::vector<Detection> detections;
};

struct ForwardStep {
  std::int64_t k = 0;
  double t = 0.0;
  double dt = 0.0;  // time since the previous step (0 for the first)
  KinematicState filtered;
  Extent extent;
  int n_assoc = 0;
};

/// Forward pass of the tracker filter with association fixed by `frames`.
/// The first frame must carry detections.
std::vector<ForwardStep> forward_filter(std::span<const MeasurementFrame> frames,
                                        const TrackerConfig& cfg);

/// Fixed-interval IMM smoother (per-model RTS with smoothed model
/// probabilities). `fallback[i]` is set where the backward step failed and
/// the filtered estimate was kept.
std::vector<KinematicState> imm_smooth(std::span<const ForwardStep> forward, const ImmParams& params,
                                       std::vector<bool>& fallback);

struct SmoothedStep {
  std::int64_t k = 0;
  double t = 0.0;
  KinematicState filtered;
  KinematicState smoothed;
  Extent filtered_extent;
  Extent extent;  // re-estimated along the smoothed centroids
  int n_assoc = 0;
  bool fallback = false;
};

struct SmoothingResult {
  std::vector<SmoothedStep> steps;
  bool flagged = false;
  std::vector<std::string> log;
};

SmoothingResult refilter_and_smooth(std::span<const MeasurementFrame> frames,
                                    const TrackerConfig& cfg);

}  // namespace baas
