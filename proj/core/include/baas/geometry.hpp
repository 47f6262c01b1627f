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

#include "baas/types.hpp"

namespace baas {

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

Mat2 rotation(double angle);

/// World position of a sensor mount.
Vec2 sensor_position(const EgoPose& ego, const SensorMount& mount);

/// World position of the mount closest to `point`; the ego origin when the
/// pose lists no mounts.
Vec2 nearest_sensor_position(const EgoPose& ego, const Vec2& point);

/// Range-rate of a reflector at `point` moving with `velocity`, seen from the
/// nearest sensor: (v - v_ego) . u_LOS.
double los_range_rate(const EgoPose& ego, const Vec2& point, const Vec2& velocity);

/// Same, with an explicit sensor position.
double los_range_rate(const Vec2& sensor, const Vec2& ego_velocity, const Vec2& point,
                      const Vec2& velocity);

/// Ellipse matrix with semi-axes (length/2, width/2), major axis at `angle`.
Mat2 extent_matrix(double length, double width, double angle);

struct EllipseAxes {
  double length = 0.0;  // 2 sqrt(major eigenvalue)
  double width = 0.0;   // 2 sqrt(minor eigenvalue)
  double angle = 0.0;   // direction of the major axis, in (-pi/2, pi/2]
};

EllipseAxes ellipse_axes(const Mat2& X);

}  // namespace baas
