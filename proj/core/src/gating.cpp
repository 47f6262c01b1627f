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

#include "baas/gating.hpp"

#include "baas/geometry.hpp"
#include "baas/stats.hpp"

#include <limits>

namespace baas {

Vec3 pseudo_measurement(const Vec4& x, const EgoPose& ego) {
  return measure(x, geometry_for(ego, Vec2(x(0), x(1))));
}

double range_rate_variance(const Vec4& x, const Mat4& P, const MeasurementGeometry& g) {
  const Vec2 p(x(0), x(1));
  const Vec2 rel_v = Vec2(x(2), x(3)) - g.ego_velocity;
  const Vec2 los = p - g.sensor;
  const double r = los.norm();
  if (r < std::numeric_limits<double>::epsilon()) return 0.0;
  const Vec2 u = los / r;
  const double vr = rel_v.dot(u);
  Vec4 J;
  J.head<2>() = (rel_v - vr * u) / r;
  J.tail<2>() = u;
  return J.dot(P * J);
}

Mat3 gate_matrix(const Vec4& x, const Mat4& P, const Mat2& X, double extent_scale,
                 const Mat3& R, const MeasurementGeometry& g) {
  Mat3 G = lifted_extent(X, extent_scale, range_rate_gradient(x, g)) + R;
  G.topLeftCorner<2, 2>() += P.topLeftCorner<2, 2>();
  G(2, 2) += range_rate_variance(x, P, g);
  return 0.5 * (G + G.transpose());
}

double gate_distance_sq(const Detection& det, const Vec4& x, const Mat4& P, const Mat2& X,
                        double extent_scale, const EgoPose& ego) {
  const MeasurementGeometry g = geometry_for(ego, Vec2(x(0), x(1)));
  const Vec3 z_hat = measure(x, g);
  return mahalanobis_sq(Vec3(det.z() - z_hat), gate_matrix(x, P, X, extent_scale, det.noise, g));
}

}  // namespace baas
