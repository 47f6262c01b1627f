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

#include "baas/filter.hpp"

#include "baas/error.hpp"
#include "baas/geometry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

namespace baas {

StateVec propagate(const MotionModel& model, const StateVec& x, double dt) {
  StateVec out = x;
  const double vx = x(2);
  const double vy = x(3);
  const double w = x(4);
  if (model.kind == MotionModelKind::ConstantTurn && std::abs(w) > 1e-9) {
    const double s = std::sin(w * dt);
    const double c = std::cos(w * dt);
    out(0) = x(0) + (vx * s - vy * (1.0 - c)) / w;
    out(1) = x(1) + (vx * (1.0 - c) + vy * s) / w;
    out(2) = vx * c - vy * s;
    out(3) = vx * s + vy * c;
  } else {
    out(0) = x(0) + vx * dt;
    out(1) = x(1) + vy * dt;
  }
  return out;
}

StateCov process_noise(const MotionModel& model, double dt) {
  StateCov Q = StateCov::Zero();
  const double q = model.accel_psd;
  const double dt2 = dt * dt;
  const double dt3 = dt2 * dt;
  const double dt4 = dt3 * dt;
  for (int axis = 0; axis < 2; ++axis) {
    Q(axis, axis) = q * dt4 / 4.0;
    Q(axis, axis + 2) = q * dt3 / 2.0;
    Q(axis + 2, axis) = q * dt3 / 2.0;
    Q(axis + 2, axis + 2) = q * dt2;
  }
  Q(4, 4) = model.turn_psd * dt;
  return Q;
}

ModelEstimate KinematicState::combined() const {
  ModelEstimate out;
  out.x.setZero();
  for (std::size_t i = 0; i < models.size(); ++i) out.x += mu(static_cast<Eigen::Index>(i)) * models[i].x;
  out.P.setZero();
  for (std::size_t i = 0; i < models.size(); ++i) {
    const StateVec d = models[i].x - out.x;
    out.P += mu(static_cast<Eigen::Index>(i)) * (models[i].P + d * d.transpose());
  }
  out.P = 0.5 * (out.P + out.P.transpose());
  return out;
}

Vec4 KinematicState::mean4() const { return combined().x.head<4>(); }

Mat4 KinematicState::cov4() const { return combined().P.topLeftCorner<4, 4>(); }

SigmaPoints sigma_points(const StateVec& x, const StateCov& P, double kappa) {
  constexpr int n = kStateDim;
  Eigen::LLT<StateCov> llt((n + kappa) * P);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("state covariance lost positive definiteness");
  }
  const StateCov L = llt.matrixL();
  SigmaPoints sp;
  sp.points.reserve(2 * n + 1);
  sp.weights.reserve(2 * n + 1);
  sp.points.push_back(x);
  sp.weights.push_back(kappa / (n + kappa));
  for (int i = 0; i < n; ++i) {
    sp.points.push_back(x + L.col(i));
    sp.weights.push_back(0.5 / (n + kappa));
  }
  for (int i = 0; i < n; ++i) {
    sp.points.push_back(x - L.col(i));
    sp.weights.push_back(0.5 / (n + kappa));
  }
  return sp;
}

UnscentedPrediction predict_model(const MotionModel& model, const ModelEstimate& est, double dt,
                                  double kappa) {
  const SigmaPoints sp = sigma_points(est.x, est.P, kappa);
  std::vector<StateVec> moved(sp.points.size());
  UnscentedPrediction out;
  out.x.setZero();
  for (std::size_t i = 0; i < sp.points.size(); ++i) {
    moved[i] = propagate(model, sp.points[i], dt);
    out.x += sp.weights[i] * moved[i];
  }
  out.P = process_noise(model, dt);
  out.cross.setZero();
  for (std::size_t i = 0; i < sp.points.size(); ++i) {
    const StateVec d = moved[i] - out.x;
    out.P += sp.weights[i] * d * d.transpose();
    out.cross += sp.weights[i] * (sp.points[i] - est.x) * d.transpose();
  }
  out.P = 0.5 * (out.P + out.P.transpose());
  return out;
}

std::vector<ModelEstimate> imm_mix(const KinematicState& state, const Eigen::MatrixXd& transition,
                                   Eigen::VectorXd& predicted_mu) {
  const auto m = static_cast<Eigen::Index>(state.models.size());
  predicted_mu = transition.transpose() * state.mu;
  std::vector<ModelEstimate> mixed(state.models.size());
  for (Eigen::Index j = 0; j < m; ++j) {
    const double cj = predicted_mu(j);
    if (!(cj > 0.0)) throw NumericalFailure("IMM predicted model probability vanished");
    ModelEstimate& out = mixed[static_cast<std::size_t>(j)];
    out.x.setZero();
    for (Eigen::Index i = 0; i < m; ++i) {
      out.x += transition(i, j) * state.mu(i) / cj * state.models[static_cast<std::size_t>(i)].x;
    }
    out.P.setZero();
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& src = state.models[static_cast<std::size_t>(i)];
      const StateVec d = src.x - out.x;
      out.P += transition(i, j) * state.mu(i) / cj * (src.P + d * d.transpose());
    }
    out.P = 0.5 * (out.P + out.P.transpose());
  }
  return mixed;
}

KinematicState imm_predict(const KinematicState& state, double dt, const ImmParams& params) {
  if (dt < 0.0) throw ValidationError("prediction interval must be non-negative");
  if (dt == 0.0) return state;
  KinematicState out;
  const std::vector<ModelEstimate> mixed = imm_mix(state, params.transition, out.mu);
  out.models.resize(mixed.size());
  for (std::size_t j = 0; j < mixed.size(); ++j) {
    const UnscentedPrediction p = predict_model(params.models[j], mixed[j], dt, params.kappa);
    out.models[j].x = p.x;
    out.models[j].P = p.P;
  }
  out.mu /= out.mu.sum();
  check_state(out, "prediction");
  return out;
}

MeasurementGeometry geometry_for(const EgoPose& ego, const Vec2& point) {
  return {nearest_sensor_position(ego, point), ego.velocity()};
}

Vec3 measure(const Vec4& x, const MeasurementGeometry& g) {
  const Vec2 p(x(0), x(1));
  const Vec2 v(x(2), x(3));
  return {x(0), x(1), los_range_rate(g.sensor, g.ego_velocity, p, v)};
}

Vec3 measure(const StateVec& x, const MeasurementGeometry& g) { return measure(Vec4(x.head<4>()), g); }

Vec2 range_rate_gradient(const Vec4& x, const MeasurementGeometry& g) {
  const Vec2 los = x.head<2>() - g.sensor;
  const double r = los.norm();
  if (r < std::numeric_limits<double>::epsilon()) return Vec2::Zero();
  const Vec2 u = los / r;
  const Vec2 rel_v = x.tail<2>() - g.ego_velocity;
  return (rel_v - rel_v.dot(u) * u) / r;
}

Mat3 lifted_extent(const Mat2& X, double extent_scale, const Vec2& vr_gradient) {
  Eigen::Matrix<double, 3, 2> G;
  G.topRows<2>().setIdentity();
  G.row(2) = vr_gradient.transpose();
  const Mat3 L = G * (extent_scale * X) * G.transpose();
  return 0.5 * (L + L.transpose());
}

CentroidMeasurement centroid_measurement(std::span<const Detection> dets, const Mat2& X,
                                         double extent_scale, const Vec2& vr_gradient) {
  if (dets.empty()) throw ValidationError("centroid measurement needs at least one detection");
  CentroidMeasurement m;
  m.n = static_cast<int>(dets.size());
  Mat3 r_mean = Mat3::Zero();
  for (const auto& d : dets) {
    m.z += d.z();
    r_mean += d.noise;
  }
  m.z /= m.n;
  r_mean /= m.n;
  for (const auto& d : dets) {
    const Vec2 e = d.position() - m.z.head<2>();
    m.scatter += e * e.transpose();
  }
  m.spread = extent_scale * X + r_mean.topLeftCorner<2, 2>();
  m.R = (lifted_extent(X, extent_scale, vr_gradient) + r_mean) / m.n;
  return m;
}

KinematicState imm_update(const KinematicState& predicted, const CentroidMeasurement& m,
                          const MeasurementGeometry& g, double kappa) {
  KinematicState out = predicted;
  const auto count = static_cast<Eigen::Index>(predicted.models.size());
  Eigen::VectorXd log_lik(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const ModelEstimate& est = predicted.models[static_cast<std::size_t>(j)];
    const SigmaPoints sp = sigma_points(est.x, est.P, kappa);
    std::vector<Vec3> zs(sp.points.size());
    Vec3 z_hat = Vec3::Zero();
    for (std::size_t i = 0; i < sp.points.size(); ++i) {
      zs[i] = measure(sp.points[i], g);
      z_hat += sp.weights[i] * zs[i];
    }
    Mat3 S = m.R;
    Eigen::Matrix<double, kStateDim, 3> Pxz = Eigen::Matrix<double, kStateDim, 3>::Zero();
    for (std::size_t i = 0; i < sp.points.size(); ++i) {
      const Vec3 dz = zs[i] - z_hat;
      S += sp.weights[i] * dz * dz.transpose();
      Pxz += sp.weights[i] * (sp.points[i] - est.x) * dz.transpose();
    }
    S = 0.5 * (S + S.transpose());
    Eigen::LLT<Mat3> llt(S);
    if (llt.info() != Eigen::Success) throw NumericalFailure("singular innovation covariance");
    const Vec3 innov = m.z - z_hat;
    const Eigen::Matrix<double, kStateDim, 3> K = llt.solve(Pxz.transpose()).transpose();
    ModelEstimate& upd = out.models[static_cast<std::size_t>(j)];
    upd.x = est.x + K * innov;
    upd.P = est.P - K * S * K.transpose();
    upd.P = 0.5 * (upd.P + upd.P.transpose());
    const Vec3 w = llt.matrixL().solve(innov);
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    log_lik(j) = -0.5 * (w.squaredNorm() + log_det + 3.0 * std::log(2.0 * std::numbers::pi));
  }
  const double max_ll = log_lik.maxCoeff();
  Eigen::VectorXd weights(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    weights(j) = predicted.mu(j) * std::exp(log_lik(j) - max_ll);
  }
  const double total = weights.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericalFailure("IMM model likelihoods degenerate");
  }
  out.mu = weights / total;
  check_state(out, "update");
  return out;
}

Extent predict_extent(const Extent& e, double dt, double tau) {
  Extent out = e;
  out.nu = 3.0 + std::exp(-dt / tau) * (e.nu - 3.0);
  return out;
}

namespace {

struct SqrtPair {
  Mat2 sqrt;
  Mat2 inv_sqrt;
};

SqrtPair symmetric_sqrt(const Mat2& m) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (m + m.transpose()));
  const Eigen::Vector2d ev = es.eigenvalues();
  if (!(ev.minCoeff() > 0.0)) throw NumericalFailure("extent update on a singular matrix");
  const Mat2& V = es.eigenvectors();
  SqrtPair out;
  out.sqrt = V * ev.cwiseSqrt().asDiagonal() * V.transpose();
  out.inv_sqrt = V * ev.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
  return out;
}

}  // namespace

Mat2 clamp_eigenvalues(const Mat2& X, double min_eig, double max_eig) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (X + X.transpose()));
  const Eigen::Vector2d ev = es.eigenvalues().cwiseMax(min_eig).cwiseMin(max_eig);
  const Mat2& V = es.eigenvectors();
  Mat2 out = V * ev.asDiagonal() * V.transpose();
  return 0.5 * (out + out.transpose());
}

Extent update_extent(const Extent& predicted, const Vec2& predicted_position,
                     const Mat2& position_cov, const CentroidMeasurement& m, double min_eig, double max_eig) {
  const Mat2& Y = m.spread;
  const Mat2 S = position_cov + Y / m.n;
  const Vec2 eps = m.z.head<2>() - predicted_position;
  const SqrtPair xs = symmetric_sqrt(predicted.X);
  const SqrtPair ss = symmetric_sqrt(S);
  const SqrtPair ys = symmetric_sqrt(Y);
  const Mat2 N_hat = xs.sqrt * ss.inv_sqrt * (eps * eps.transpose()) * ss.inv_sqrt * xs.sqrt;
  const Mat2 Z_hat = xs.sqrt * ys.inv_sqrt * m.scatter * ys.inv_sqrt * xs.sqrt;
  Extent out;
  out.X = (predicted.nu * predicted.X + N_hat + Z_hat) / (predicted.nu + m.n);
  out.X = clamp_eigenvalues(out.X, min_eig, max_eig);
  out.nu = predicted.nu + m.n;
  return out;
}

void check_state(const KinematicState& s, const char* where) {
  if (s.mu.size() != static_cast<Eigen::Index>(s.models.size())) {
    throw NumericalFailure(std::string(where) + ": model probability size mismatch");
  }
  if ((s.mu.array() < 0.0).any() || (s.mu.array() > 1.0).any() ||
      std::abs(s.mu.sum() - 1.0) > 1e-9) {
    throw NumericalFailure(std::string(where) + ": model probabilities not normalized");
  }
  for (const auto& m : s.models) {
    if (!m.x.allFinite()) throw NumericalFailure(std::string(where) + ": non-finite state");
    Eigen::LLT<StateCov> llt(m.P);
    if (llt.info() != Eigen::Success) {
      throw NumericalFailure(std::string(where) + ": covariance lost positive definiteness");
    }
  }
}

}  // namespace baas
