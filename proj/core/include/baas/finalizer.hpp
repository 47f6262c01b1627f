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

#include "baas/smoother.hpp"
#include "baas/tracker.hpp"
#include "baas/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace baas {

/// The supervisor's verdict on a hypothesis set. Every merge group is one
/// object; accepted ids outside any group are single-track objects. Classes
/// and size overrides are keyed by the object's smallest track id.
struct SupervisionDecision {
  std::vector<TrackId> accepted;
  std::vector<std::vector<TrackId>> merge_groups;
  std::map<TrackId, ObjectClass> classes;
  std::map<TrackId, SizeBounds> size_overrides;

  bool operator==(const SupervisionDecision&) const;
};

struct SupervisedObject {
  ObjectId object_id = 0;
  std::vector<TrackId> track_ids;  // sorted
  ObjectClass object_class = ObjectClass::Other;
  std::optional<SizeBounds> size_override;
};

/// Problems with a decision; empty when it is valid against `hypotheses`.
std::vector<std::string> validation_errors(const SupervisionDecision& decision,
                                           const HypothesisSet& hypotheses);

/// Throws ValidationError listing every problem.
void validate(const SupervisionDecision& decision, const HypothesisSet& hypotheses);

/// Objects described by a decision, ordered by object id.
std::vector<SupervisedObject> supervised_objects(const SupervisionDecision& decision);

/// Union of the detections of all group members per scan, spanning the first
/// to the last scan with detections. Scans in between without detections are
/// kept as empty frames.
std::vector<MeasurementFrame> merge_tracks(std::span<const TrackId> group,
                                           const HypothesisSet& hypotheses,
                                           const Recording& recording);

/// Heading atan2(vy, vx) when the speed exceeds eta_v, otherwise prev_alpha.
double align_orientation(const Vec2& velocity, double eta_v, double prev_alpha);

/// Weighted average of per-scan (length, width) with weights nu.
std::pair<double, double> average_extent(std::span<const std::pair<double, double>> lw,
                                         std::span<const double> nu);

/// Clamps (length, width) into the class interval. PedestrianGroup and Other
/// pass through.
std::pair<double, double> clamp_extent(ObjectClass c, double length, double width,
                                       const ClassBounds& bounds);

/// Which corrections finalize applies; all on for the final ground truth.
struct FinalizeOptions {
  bool align = true;
  bool fix_size = true;
  bool clamp = true;
};

struct FinalizerConfig {
  TrackerConfig tracker = TrackerConfig::defaults();
  ClassBounds bounds = ClassBounds::defaults();
  FinalizeOptions options;
};

/// One ground-truth trajectory per supervised object.
std::vector<ObjectTrajectory> finalize(const SupervisionDecision& decision,
                                       const HypothesisSet& hypotheses, const Recording& recording,
                                       const FinalizerConfig& cfg);

/// Finalizes a single object from its merged measurement frames.
ObjectTrajectory finalize_object(const SupervisedObject& object,
                                 std::span<const MeasurementFrame> frames,
                                 const FinalizerConfig& cfg);

}  // namespace baas
