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

#include "baas/smoother.hpp"

#include "baas/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace baas {

std::vector<ForwardStep> forward_filter(std::span<const MeasurementFrame> frames,
                                        const TrackerConfig& cfg) {
  if (frames.empty()) throw ValidationError("cannot filter an empty measurement sequence");
  if (frames.front().detections.empty()) {
    throw ValidationError("measurement sequence must start with detections");
  }
  std::vector<ForwardStep> out;
  out.reserve(frames.size());
  TrackHypothesis track =
      initiate_track(0, frames.front().detections, frames.front().ego, frames.front().k, cfg);
  out.push_back({frames.front().k, frames.front().t, 0.0, track.state, track.extent,
                 static_cast<int>(frames.front().detections.size())});
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const MeasurementFrame& f = frames[i];
    const double dt = f.t - frames[i - 1].t;
    if (!(dt > 0.0)) throw ValidationError("measurement frames must have increasing time");
    track = predict_track(track, dt, cfg);
    if (!f.detections.empty()) track = update_track(track, f.detections, f.ego, f.k, cfg);
    out.push_back({f.k, f.t, dt, track.state, track.extent, static_cast<int>(f.detections.size())});
  }
  return out;
}

namespace {

// One backward step of the smoother from step i+1 (smoothed) to step i.
KinematicState smooth_step(const KinematicState& filtered, const KinematicState& next_smoothed,
                           double dt, const ImmParams& params) {
  const auto m = static_cast<Eigen::Index>(filtered.models.size());
  const Eigen::VectorXd predicted_mu = params.transition.transpose() * filtered.mu;

  // Backward model transition weights D(i, j) = Pi(i, j) mu_s(j) / c(j).
  Eigen::MatrixXd D(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!(predicted_mu(j) > 0.0)) throw NumericalFailure("vanishing predicted model probability");
      D(i, j) = params.transition(i, j) * next_smoothed.mu(j) / predicted_mu(j);
    }
  }

  KinematicState out;
  out.models.resize(filtered.models.size());
  out.mu.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) out.mu(i) = filtered.mu(i) * D.row(i).sum();
  const double total = out.mu.sum();
  if (!(total > 0.0)) throw NumericalFailure("smoothed model probabilities vanished");
  out.mu /= total;

  for (Eigen::Index i = 0; i < m; ++i) {
    const ModelEstimate& fi = filtered.models[static_cast<std::size_t>(i)];
    // Mixture of the smoothed next-step models seen from model i.
    const double row = D.row(i).sum();
    ModelEstimate mixed;
    mixed.x.setZero();
    for (Eigen::Index j = 0; j < m; ++j) {
      mixed.x += D(i, j) / row * next_smoothed.models[static_cast<std::size_t>(j)].x;
    }
    mixed.P.setZero();
    for (Eigen::Index j = 0; j < m; ++j) {
      const ModelEstimate& sj = next_smoothed.models[static_cast<std::size_t>(j)];
      const StateVec d = sj.x - mixed.x;
      mixed.P += D(i, j) / row * (sj.P + d * d.transpose());
    }

    const UnscentedPrediction pred =
        predict_model(params.models[static_cast<std::size_t>(i)], fi, dt, params.kappa);
    Eigen::LLT<StateCov> llt(pred.P);
    if (llt.info() != Eigen::Success) throw NumericalFailure("singular predicted covariance");
    const StateCov G = llt.solve(pred.cross.transpose()).transpose();
    ModelEstimate& si = out.models[static_cast<std::size_t>(i)];
    si.x = fi.x + G * (mixed.x - pred.x);
    si.P = fi.P + G * (mixed.P - pred.P) * G.transpose();
    si.P = 0.5 * (si.P + si.P.transpose());
  }
  check_state(out, "smoothing");
  return out;
}

}  // namespace

std::vector<KinematicState> imm_smooth(std::span<const ForwardStep> forward, const ImmParams& params,
                                       std::vector<bool>& fallback) {
  std::vector<KinematicState> out(forward.size());
  fallback.assign(forward.size(), false);
  if (forward.empty()) return out;
  out.back() = forward.back().filtered;
  for (std::size_t n = forward.size() - 1; n-- > 0;) {
    try {
      out[n] = smooth_step(forward[n].filtered, out[n + 1], forward[n + 1].dt, params);
    } catch (const NumericalFailure&) {
      out[n] = forward[n].filtered;
      fallback[n] = true;
    }
  }
  return out;
}

SmoothingResult refilter_and_smooth(std::span<const MeasurementFrame> frames,
                                    const TrackerConfig& cfg) {
  const std::vector<ForwardStep> forward = forward_filter(frames, cfg);
  std::vector<bool> fallback;
  const std::vector<KinematicState> smoothed = imm_smooth(forward, cfg.imm, fallback);

  SmoothingResult out;
  out.steps.resize(forward.size());
  Extent extent = forward.front().extent;
  for (std::size_t i = 0; i < forward.size(); ++i) {
    SmoothedStep& s = out.steps[i];
    s.k = forward[i].k;
    s.t = forward[i].t;
    s.filtered = forward[i].filtered;
    s.smoothed = smoothed[i];
    s.filtered_extent = forward[i].extent;
    s.n_assoc = forward[i].n_assoc;
    s.fallback = fallback[i];
    if (s.fallback) {
      out.flagged = true;
      out.log.push_back("scan " + std::to_string(s.k) + ": smoother fell back to filtered estimate");
    }
    if (i > 0) {
      extent = predict_extent(extent, forward[i].dt, cfg.rmm_tau);
      if (!frames[i].detections.empty()) {
        const ModelEstimate c = s.smoothed.combined();
        const CentroidMeasurement m =
            centroid_measurement(frames[i].detections, extent.X, cfg.extent_scale);
        extent = update_extent(extent, c.x.head<2>(), c.P.topLeftCorner<2, 2>(), m,
                               cfg.min_extent_eig, cfg.max_extent_eig);
      }
    }
    s.extent = extent;
  }
  return out;
}

}  // namespace baas
