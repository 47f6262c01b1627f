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

#include <Eigen/Core>

namespace baas {

/// Relative asymmetry accepted (and removed) by symmetrize_checked.
inline constexpr double kSymmetryTolerance = 1e-9;

/// Returns (M + M^T)/2 when max|M - M^T| <= 1e-9 * max|M|, otherwise throws
/// DegenerateMatrixError.
Eigen::MatrixXd symmetrize_checked(const Eigen::MatrixXd& m);

template <int N>
Eigen::Matrix<double, N, N> symmetrize_checked(const Eigen::Matrix<double, N, N>& m) {
  return symmetrize_checked(Eigen::MatrixXd(m));
}

/// Symmetrizes and verifies positive definiteness with a Cholesky probe.
Eigen::MatrixXd require_spd(const Eigen::MatrixXd& m);

template <int N>
Eigen::Matrix<double, N, N> require_spd(const Eigen::Matrix<double, N, N>& m) {
  return require_spd(Eigen::MatrixXd(m));
}

bool is_spd(const Eigen::MatrixXd& m);

/// Squared Mahalanobis distance r^T S^-1 r.
double mahalanobis_sq(const Vec3& residual, const Mat3& S);
double mahalanobis_sq(const Eigen::VectorXd& residual, const Eigen::MatrixXd& S);

/// Inverse CDF of the chi-square distribution with `dof` degrees of freedom.
double chi2_quantile(int dof, double p);

/// CDF of the chi-square distribution.
double chi2_cdf(int dof, double x);

}  // namespace baas
