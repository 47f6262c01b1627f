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

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace baas {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

using DetId = std::int64_t;
using TrackId = std::int64_t;
using ObjectId = std::int64_t;

/// Object id used for clutter and static-world returns in label sets.
inline constexpr ObjectId kClutterObject = -1;

/// One radar return in the world frame. Measurement vector is (x, y, vr),
/// vr positive when the reflector recedes from the sensor.
struct Detection {
  DetId id = 0;
  double x = 0.0;
  double y = 0.0;
  double vr = 0.0;
  Mat3 noise = Mat3::Identity();

  Vec3 z() const { return {x, y, vr}; }
  Vec2 position() const { return {x, y}; }
};

/// Sensor mounting position in vehicle coordinates.
struct SensorMount {
  double x = 0.0;
  double y = 0.0;
  double boresight = 0.0;
};

struct EgoPose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  double v = 0.0;
  double yaw_rate = 0.0;
  std::vector<SensorMount> sensors;

  Vec2 position() const { return {x, y}; }
  Vec2 velocity() const;
};

struct RadarScan {
  std::int64_t k = 0;
  double t = 0.0;
  EgoPose ego;
  std::vector<Detection> detections;

  const Detection* find(DetId id) const;
};

enum class ObjectClass { Pedestrian, PedestrianGroup, Cyclist, Car, Truck, Other };

std::string_view to_string(ObjectClass c);
ObjectClass object_class_from_string(std::string_view name);

/// Rigid classes keep a fixed size and align with their heading.
bool is_rigid(ObjectClass c);
/// Classes whose per-scan extent is kept as estimated.
bool keeps_per_scan_extent(ObjectClass c);

enum class TrackStatus { Initialized, Unconfident, Verified, Deleted };

std::string_view to_string(TrackStatus s);
TrackStatus track_status_from_string(std::string_view name);

/// Random-matrix extent: expected ellipse matrix X and degrees of freedom.
struct Extent {
  Mat2 X = Mat2::Identity();
  double nu = 5.0;
};

struct SizeBounds {
  double min_length = 0.0;
  double max_length = 0.0;
  double min_width = 0.0;
  double max_width = 0.0;
};

struct ClassBounds {
  std::map<ObjectClass, SizeBounds> sizes;
  double eta_v = 1.0;

  static ClassBounds defaults();
  void validate() const;
};

/// Recording-level metadata. `frame` names the coordinate frame the
/// detections were written in; loading always yields world coordinates.
struct RecordingMeta {
  std::string id = "recording";
  int sensor_count = 1;
  double scan_rate_hz = 10.0;
};

struct Recording {
  RecordingMeta meta;
  std::vector<RadarScan> scans;

  const RadarScan& scan(std::int64_t k) const;
  std::size_t detection_count() const;
};

struct ScanLabels {
  std::int64_t k = 0;
  std::map<DetId, ObjectId> labels;
};

/// Binary manual labels; detections missing from a scan's map are unlabeled.
struct ManualLabelSet {
  std::vector<ScanLabels> scans;
  std::map<ObjectId, ObjectClass> classes;

  const ScanLabels* find(std::int64_t k) const;
};

/// Per-scan smoothed state of a finalized object.
struct TrajectoryState {
  std::int64_t k = 0;
  Vec4 x = Vec4::Zero();  // (x, y, vx, vy)
  Mat4 P = Mat4::Identity();
  double alpha = 0.0;
  Mat2 X = Mat2::Identity();  // extent used for annotation at this scan
  int n_assoc = 0;
};

struct ObjectTrajectory {
  ObjectId object_id = 0;
  ObjectClass object_class = ObjectClass::Other;
  std::int64_t k_start = 0;
  std::int64_t k_end = 0;
  std::vector<TrajectoryState> states;
  std::optional<double> length;
  std::optional<double> width;
  std::vector<TrackId> source_track_ids;

  const TrajectoryState* at(std::int64_t k) const;
};

enum class Region { Core, Border };

std::string_view to_string(Region r);
Region region_from_string(std::string_view name);

struct AnnotationRecord {
  std::int64_t k = 0;
  DetId det_id = 0;
  ObjectId object_id = 0;
  double rho = 1.0;
  Region region = Region::Core;
  double d2 = 0.0;
};

}  // namespace baas
