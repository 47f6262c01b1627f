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

// Unscented IMM filter with random-matrix extent. The kinematic state of
// every motion model is (x, y, vx, vy, omega); the constant-velocity model
// carries omega along without using it so that models can be mixed.

#include "baas/types.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace baas {

inline constexpr int kStateDim = 5;
using StateVec = Eigen::Matrix<double, kStateDim, 1>;
using StateCov = Eigen::Matrix<double, kStateDim, kStateDim>;

enum class MotionModelKind { ConstantVelocity, ConstantTurn };

struct MotionModel {
  MotionModelKind kind = MotionModelKind::ConstantVelocity;
  double accel_psd = 1.0;  // (m/s^2)^2 per axis, white-noise acceleration
  double turn_psd = 0.0;   // (rad/s^2)^2 on the turn rate
};

StateVec propagate(const MotionModel& model, const StateVec& x, double dt);
StateCov process_noise(const MotionModel& model, double dt);

/// Estimate of a single IMM model.
struct ModelEstimate {
  StateVec x = StateVec::Zero();
  StateCov P = StateCov::Identity();
};

/// IMM state: one estimate per motion model plus model probabilities.
struct KinematicState {
  std::vector<ModelEstimate> models;
  Eigen::VectorXd mu;

  /// Moment-matched combination of all model estimates.
  ModelEstimate combined() const;
  Vec4 mean4() const;
  Mat4 cov4() const;
};

/// Symmetric 2n+1 sigma-point set with spread kappa (weights positive for kappa > 0).
struct SigmaPoints {
  std::vector<StateVec> points;
  std::vector<double> weights;
};

SigmaPoints sigma_points(const StateVec& x, const StateCov& P, double kappa);

struct UnscentedPrediction {
  StateVec x;
  StateCov P;
  StateCov cross;  // E[(x_k - x)(x_k+1 - x_pred)^T]
};

/// Unscented prediction of one model estimate, process noise included.
UnscentedPrediction predict_model(const MotionModel& model, const ModelEstimate& est, double dt,
                                  double kappa);

struct ImmParams {
  std::vector<MotionModel> models;
  Eigen::MatrixXd transition;  // row i: P(model j at k+1 | model i at k)
  double kappa = 1.0;
};

/// Interaction (mixing) step of the IMM. Returns mixed per-model estimates and
/// writes the predicted model probabilities into `predicted_mu`.
std::vector<ModelEstimate> imm_mix(const KinematicState& state, const Eigen::MatrixXd& transition,
                                   Eigen::VectorXd& predicted_mu);

/// Mixing plus unscented propagation of every model. dt == 0 returns the input.
KinematicState imm_predict(const KinematicState& state, double dt, const ImmParams& params);

/// Measurement geometry for range-rate prediction.
struct MeasurementGeometry {
  Vec2 sensor = Vec2::Zero();
  Vec2 ego_velocity = Vec2::Zero();
};

MeasurementGeometry geometry_for(const EgoPose& ego, const Vec2& point);

/// Noiseless measurement (x, y, vr) of a kinematic state.
Vec3 measure(const StateVec& x, const MeasurementGeometry& g);
Vec3 measure(const Vec4& x, const MeasurementGeometry& g);

/// Range-rate sensitivity to the centroid position: tangential relative
/// velocity over range.
Vec2 range_rate_gradient(const Vec4& x, const MeasurementGeometry& g);

/// Centroid measurement of a detection set: mean z, and its covariance
/// (G scale*X G^T + mean R) / n with G = [I; vr_gradient^T]. The lifted
/// extent term carries the range-rate spread across the object.
struct CentroidMeasurement {
  Vec3 z = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Mat2 scatter = Mat2::Zero();  // sum of (p - p_mean)(p - p_mean)^T
  Mat2 spread = Mat2::Identity();  // scale*X + mean R_pos (one detection)
  int n = 0;
};

CentroidMeasurement centroid_measurement(std::span<const Detection> dets, const Mat2& X,
                                         double extent_scale,
                                         const Vec2& vr_gradient = Vec2::Zero());

/// [I; gradient^T] scale*X [I, gradient]: extent covariance in measurement space.
Mat3 lifted_extent(const Mat2& X, double extent_scale, const Vec2& vr_gradient);

/// Unscented IMM measurement update with a centroid measurement. Model
/// probabilities are re-weighted by the per-model likelihoods.
KinematicState imm_update(const KinematicState& predicted, const CentroidMeasurement& m,
                          const MeasurementGeometry& g, double kappa);

/// Random-matrix extent prediction: X is kept, nu decays towards 3.
Extent predict_extent(const Extent& e, double dt, double tau);

/// Random-matrix extent update from a detection cluster, given the predicted
/// centroid position and its covariance. The measurement spread of `m` must
/// have been built with the predicted X. Eigenvalues are clamped to
/// [min_eig, max_eig].
Extent update_extent(const Extent& predicted, const Vec2& predicted_position,
                     const Mat2& position_cov, const CentroidMeasurement& m, double min_eig,
                     double max_eig);

Mat2 clamp_eigenvalues(const Mat2& X, double min_eig, double max_eig);

/// Throws NumericalFailure unless every covariance is SPD and mu is a
/// probability vector.
void check_state(const KinematicState& s, const char* where);

}  // namespace baas
