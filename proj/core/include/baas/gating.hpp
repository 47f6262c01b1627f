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
#include "baas/types.hpp"

namespace baas {

/// Pseudo-measurement (x, y, vr) of a centroid state (x, y, vx, vy).
Vec3 pseudo_measurement(const Vec4& x, const EgoPose& ego);

/// First-order range-rate variance of a centroid state.
double range_rate_variance(const Vec4& x, const Mat4& P, const MeasurementGeometry& g);

/// Gate matrix of the core criterion for one detection:
///   lifted_extent(X) + R + blockdiag(P_pos, var_vr).
Mat3 gate_matrix(const Vec4& x, const Mat4& P, const Mat2& X, double extent_scale,
                 const Mat3& R, const MeasurementGeometry& g);

/// Squared Mahalanobis distance of a detection to a centroid state under gate_matrix.
double gate_distance_sq(const Detection& det, const Vec4& x, const Mat4& P, const Mat2& X,
                        double extent_scale, const EgoPose& ego);

}  // namespace baas
