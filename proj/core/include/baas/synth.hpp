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

#include "baas/scenario_io.hpp"
#include "baas/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace baas {

/// Constant speed and turn rate for a duration.
struct MotionSegment {
  double duration = 1.0;   // s
  double speed = 0.0;      // m/s
  double turn_rate = 0.0;  // rad/s
};

/// One scripted object. The path is either a waypoint polyline traversed at
/// `speed`, or a start pose followed by kinematic segments. Past the end of
/// its script the object keeps its last velocity.
struct ObjectScript {
  ObjectId id = 0;
  ObjectClass object_class = ObjectClass::Car;
  double birth = 0.0;  // s
  double death = 1e9;  // s
  double length = 4.5;
  double width = 1.8;
  std::optional<double> lambda;  // overrides the class rate

  std::vector<Vec2> waypoints;
  double speed = 0.0;

  Vec2 start = Vec2::Zero();
  double heading = 0.0;
  std::vector<MotionSegment> segments;
};

/// Field-of-view sector of one sensor, in ego coordinates.
struct SensorSector {
  SensorMount mount;
  double fov = 2.0 * 3.14159265358979323846;  // full opening angle
  double max_range = 100.0;
};

struct WorldBounds {
  double min_x = -500.0;
  double max_x = 500.0;
  double min_y = -500.0;
  double max_y = 500.0;
};

struct SynthConfig {
  std::uint64_t seed = 1;
  double duration = 10.0;  // s
  double scan_rate_hz = 10.0;
  std::vector<ObjectScript> objects;
  std::map<ObjectClass, double> lambda;  // mean detections per scan
  double sigma_pos = 0.15;
  double sigma_vr = 0.1;
  double clutter_rate = 0.0;  // mean clutter detections per scan
  std::vector<SensorSector> sensors{SensorSector{}};
  double ego_v = 0.0;
  double ego_yaw_rate = 0.0;
  WorldBounds bounds;
  std::string recording_id = "synthetic";

  static std::map<ObjectClass, double> default_lambda();
  void validate() const;
};

struct ObjectKinematics {
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  double heading = 0.0;
};

/// True pose of a scripted object `t` seconds after the recording start.
ObjectKinematics object_at(const ObjectScript& script, double t);

struct Scenario {
  Recording recording;
  ManualLabelSet labels;
  std::vector<ObjectTrajectory> truth;
};

Scenario generate_scenario(const SynthConfig& cfg);

/// Whether a world point lies in any sensor sector of the pose.
bool in_field_of_view(const EgoPose& ego, std::span<const SensorSector> sensors, const Vec2& p);

/// Randomized multi-object scenario: `objects` movers in separate lanes.
SynthConfig random_scenario(std::uint64_t seed, int objects, double clutter_rate,
                            double duration = 10.0);

/// One car driving straight, turning through 90 degrees and driving straight.
SynthConfig turning_car_scenario(std::uint64_t seed);

Json encode(const SynthConfig& cfg);
SynthConfig decode_synth_config(const Json& j);

}  // namespace baas
