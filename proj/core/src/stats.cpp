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

#include "baas/stats.hpp"

#include "baas/error.hpp"

#include <Eigen/Cholesky>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <string>

namespace baas {

Eigen::MatrixXd symmetrize_checked(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DegenerateMatrixError("matrix is not square");
  if (!m.allFinite()) throw DegenerateMatrixError("matrix has non-finite entries");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    throw DegenerateMatrixError("matrix asymmetry " + std::to_string(asym) +
                                " exceeds tolerance");
  }
  return 0.5 * (m + m.transpose());
}

bool is_spd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || !m.allFinite()) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  return llt.info() == Eigen::Success;
}

Eigen::MatrixXd require_spd(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd s = symmetrize_checked(m);
  if (!is_spd(s)) throw DegenerateMatrixError("matrix is not positive definite");
  return s;
}

double mahalanobis_sq(const Eigen::VectorXd& residual, const Eigen::MatrixXd& S) {
  if (S.rows() != residual.size() || S.cols() != residual.size()) {
    throw DegenerateMatrixError("dimension mismatch between residual and covariance");
  }
  const Eigen::MatrixXd sym = symmetrize_checked(S);
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw DegenerateMatrixError("covariance is not positive definite");
  }
  const Eigen::VectorXd w = llt.matrixL().solve(residual);
  return w.squaredNorm();
}

double mahalanobis_sq(const Vec3& residual, const Mat3& S) {
  const double scale = S.cwiseAbs().maxCoeff();
  if (!S.allFinite() || (S - S.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw DegenerateMatrixError("covariance is not symmetric");
  }
  const Mat3 sym = 0.5 * (S + S.transpose());
  Eigen::LLT<Mat3> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw DegenerateMatrixError("covariance is not positive definite");
  }
  const Vec3 w = llt.matrixL().solve(residual);
  return w.squaredNorm();
}

double chi2_quantile(int dof, double p) {
  if (dof <= 0) throw DomainError("chi-square degrees of freedom must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("chi-square quantile needs 0 < p < 1");
  return 2.0 * boost::math::gamma_p_inv(0.5 * dof, p);
}

double chi2_cdf(int dof, double x) {
  if (dof <= 0) throw DomainError("chi-square degrees of freedom must be positive");
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(0.5 * dof, 0.5 * x);
}

}  // namespace baas
