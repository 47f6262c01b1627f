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

#include "baas/evaluator.hpp"
#include "baas/types.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace baas {

/// Track features the border threshold may depend on.
struct BorderFeatures {
  double speed = 0.0;  // m/s
  double area = 0.0;   // m^2, ellipse area
  double range = 0.0;  // m, to the nearest sensor
};

/// Additional threshold of the border band.
///   constant: eta = c0
///   linear:   eta = max(0, c0 + c1 * speed + c2 * area + c3 * range)
struct BorderFn {
  enum class Form { Constant, Linear };

  Form form = Form::Constant;
  std::vector<double> params{0.0};

  static BorderFn constant(double c);
  static BorderFn linear(double c0, double c_speed, double c_area, double c_range);

  double operator()(const BorderFeatures& f) const;
  void validate() const;
  std::string describe() const;
  bool operator==(const BorderFn&) const = default;
};

BorderFeatures border_features(const TrajectoryState& s, const EgoPose& ego);

/// (x, y) of the smoothed centroid and the line-of-sight relative velocity.
Vec3 pseudo_measurement(const ObjectTrajectory& traj, std::int64_t k, const EgoPose& ego);

struct AnnotatorConfig {
  double alpha = 0.95;
  double extent_scale = 0.25;
  BorderFn border;
  double rho_floor_scale = 1e-9;  // epsilon guarding a zero border width
};

/// Core/border records for every (detection, object) pair of one scan.
std::vector<AnnotationRecord> annotate_scan(std::span<const ObjectTrajectory> trajectories,
                                            const RadarScan& scan, const AnnotatorConfig& cfg);

/// Highest-rho object per detection; ties go to smaller d2, then lower object id.
std::map<DetId, ObjectId> binary_labels(std::span<const AnnotationRecord> records);

struct AnnotationSet {
  std::vector<AnnotationRecord> records;  // ordered by (k, det_id, object_id)
  AnnotatorConfig config;
  std::vector<std::string> log;
};

AnnotationSet annotate_recording(std::span<const ObjectTrajectory> trajectories,
                                 const Recording& recording, const AnnotatorConfig& cfg);

DetectionLabels binary_labels(const AnnotationSet& set);

struct BorderScore {
  BorderFn border;
  ConfusionCounts counts;
  PrecisionRecall scores;
  double mean_eta = 0.0;
};

struct BorderOptimization {
  BorderFn best;
  std::vector<BorderScore> table;
};

/// Grid search over border candidates by binary-label F1 against manual labels.
/// `id_map` maps trajectory object ids onto label object ids (identity when empty).
BorderOptimization optimize_border(const ManualLabelSet& labels,
                                   std::span<const ObjectTrajectory> trajectories,
                                   const Recording& recording, std::span<const BorderFn> candidates,
                                   const AnnotatorConfig& base,
                                   const std::map<ObjectId, ObjectId>& id_map = {});

}  // namespace baas
