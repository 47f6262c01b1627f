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

#include "baas/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

namespace baas {

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

Mat2 rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

Vec2 sensor_position(const EgoPose& ego, const SensorMount& mount) {
  return ego.position() + rotation(ego.yaw) * Vec2(mount.x, mount.y);
}

Vec2 nearest_sensor_position(const EgoPose& ego, const Vec2& point) {
  if (ego.sensors.empty()) return ego.position();
  Vec2 best = sensor_position(ego, ego.sensors.front());
  double best_d = (best - point).squaredNorm();
  for (std::size_t i = 1; i < ego.sensors.size(); ++i) {
    const Vec2 s = sensor_position(ego, ego.sensors[i]);
    const double d = (s - point).squaredNorm();
    if (d < best_d) {
      best = s;
      best_d = d;
    }
  }
  return best;
}

double los_range_rate(const Vec2& sensor, const Vec2& ego_velocity, const Vec2& point,
                      const Vec2& velocity) {
  const Vec2 los = point - sensor;
  const double r = los.norm();
  if (r < std::numeric_limits<double>::epsilon()) return 0.0;
  return (velocity - ego_velocity).dot(los / r);
}

double los_range_rate(const EgoPose& ego, const Vec2& point, const Vec2& velocity) {
  return los_range_rate(nearest_sensor_position(ego, point), ego.velocity(), point, velocity);
}

Mat2 extent_matrix(double length, double width, double angle) {
  const Mat2 r = rotation(angle);
  Mat2 d = Mat2::Zero();
  d(0, 0) = 0.25 * length * length;
  d(1, 1) = 0.25 * width * width;
  return r * d * r.transpose();
}

EllipseAxes ellipse_axes(const Mat2& X) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (X + X.transpose()));
  const Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
  const Eigen::Vector2d major = es.eigenvectors().col(1);
  EllipseAxes axes;
  axes.length = 2.0 * std::sqrt(ev(1));
  axes.width = 2.0 * std::sqrt(ev(0));
  double a = std::atan2(major.y(), major.x());
  if (a > std::numbers::pi / 2) a -= std::numbers::pi;
  if (a <= -std::numbers::pi / 2) a += std::numbers::pi;
  axes.angle = a;
  return axes;
}

}  // namespace baas
