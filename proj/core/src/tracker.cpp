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

#include "baas/tracker.hpp"

#include "baas/error.hpp"
#include "baas/gating.hpp"
#include "baas/geometry.hpp"
#include "baas/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace baas {

TrackerConfig TrackerConfig::defaults() {
  TrackerConfig cfg;
  cfg.imm.models = {
      MotionModel{MotionModelKind::ConstantVelocity, 1.0, 0.01},
      MotionModel{MotionModelKind::ConstantTurn, 0.25, 0.5},
  };
  cfg.imm.transition.resize(2, 2);
  cfg.imm.transition << 0.95, 0.05, 0.05, 0.95;
  cfg.imm.kappa = 1.0;
  cfg.initial_mu = Eigen::Vector2d(0.5, 0.5);
  return cfg;
}

void TrackerConfig::validate() const {
  const auto m = static_cast<Eigen::Index>(imm.models.size());
  if (m == 0) throw ValidationError("tracker needs at least one motion model");
  if (imm.transition.rows() != m || imm.transition.cols() != m) {
    throw ValidationError("transition matrix must be square with one row per model");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if ((imm.transition.row(i).array() < 0.0).any() ||
        std::abs(imm.transition.row(i).sum() - 1.0) > 1e-9) {
      throw ValidationError("transition matrix rows must be probability vectors");
    }
  }
  if (initial_mu.size() != m || (initial_mu.array() < 0.0).any() ||
      std::abs(initial_mu.sum() - 1.0) > 1e-9) {
    throw ValidationError("initial model probabilities must be a probability vector");
  }
  if (!(imm.kappa > 0.0)) throw ValidationError("unscented spread kappa must be positive");
  if (!(extent_scale > 0.0)) throw ValidationError("extent scale z must be positive");
  if (!(rmm_tau > 0.0)) throw ValidationError("extent forgetting time must be positive");
  if (!(initial_nu > 3.0)) throw ValidationError("initial extent degrees of freedom must exceed 3");
  if (!(min_extent_eig > 0.0 && min_extent_eig <= max_extent_eig)) {
    throw ValidationError("extent eigenvalue bounds must satisfy 0 < min <= max");
  }
  if (!(initial_extent > 0.0)) throw ValidationError("initial extent must be positive");
  if (!(cluster_radius > 0.0)) throw ValidationError("clustering radius must be positive");
  if (min_cluster_size < 1) throw ValidationError("minimum cluster size must be at least 1");
  if (!(gate_probability > 0.0 && gate_probability < 1.0)) {
    throw ValidationError("gate probability must lie in (0, 1)");
  }
  if (confirm_m < 1 || confirm_n < confirm_m) throw ValidationError("need 1 <= M <= N");
  if (verify_hits < confirm_m) throw ValidationError("verify_hits must be at least M");
  if (max_misses < 1) throw ValidationError("max_misses must be at least 1");
}

double TrackerConfig::gate_threshold() const { return chi2_quantile(3, gate_probability); }

int TrackHypothesis::total_hits() const {
  return static_cast<int>(std::count_if(assoc_counts.begin(), assoc_counts.end(),
                                        [](int n) { return n > 0; }));
}

int TrackHypothesis::trailing_misses() const {
  int misses = 0;
  for (auto it = assoc_counts.rbegin(); it != assoc_counts.rend() && *it == 0; ++it) ++misses;
  return misses;
}

int TrackHypothesis::hits_in_window(int n) const {
  const auto size = static_cast<int>(assoc_counts.size());
  const int start = std::max(0, size - n);
  return static_cast<int>(std::count_if(assoc_counts.begin() + start, assoc_counts.end(),
                                        [](int c) { return c > 0; }));
}

std::int64_t TrackRecord::last_hit_k() const {
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (it->n_assoc > 0) return it->k;
  }
  return history.front().k;
}

bool TrackRecord::ever(TrackStatus s) const {
  return std::any_of(history.begin(), history.end(),
                     [s](const TrackSnapshot& snap) { return snap.status == s; });
}

const TrackSnapshot* TrackRecord::at(std::int64_t k) const {
  auto it = std::lower_bound(history.begin(), history.end(), k,
                             [](const TrackSnapshot& s, std::int64_t key) { return s.k < key; });
  if (it != history.end() && it->k == k) return &*it;
  return nullptr;
}

const TrackRecord* HypothesisSet::find(TrackId id) const {
  auto it = std::lower_bound(tracks.begin(), tracks.end(), id,
                             [](const TrackRecord& r, TrackId key) { return r.track_id < key; });
  if (it != tracks.end() && it->track_id == id) return &*it;
  return nullptr;
}

std::vector<DetId> HypothesisSet::detections_of(TrackId id, std::int64_t k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= associations.size()) return {};
  const ScanAssociation& a = associations[static_cast<std::size_t>(k)];
  if (auto it = a.assigned.find(id); it != a.assigned.end()) return it->second;
  for (std::size_t i = 0; i < a.born.size(); ++i) {
    if (a.born[i] == id) return a.leftover[i];
  }
  return {};
}

TrackHypothesis predict_track(const TrackHypothesis& track, double dt, const TrackerConfig& cfg) {
  if (dt < 0.0) throw ValidationError("prediction interval must be non-negative");
  if (dt == 0.0) return track;
  TrackHypothesis out = track;
  out.state = imm_predict(track.state, dt, cfg.imm);
  out.extent = predict_extent(track.extent, dt, cfg.rmm_tau);
  return out;
}

namespace {

// Union-find over detection indices.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct GateView {
  TrackId id;
  Vec4 x;
  Mat4 P;
  Mat2 X;
};

}  // namespace

ScanAssociation adaptive_cluster(const RadarScan& scan, std::span<const TrackHypothesis> tracks,
                                 const TrackerConfig& cfg) {
  ScanAssociation out;
  out.k = scan.k;
  const double threshold = cfg.gate_threshold();

  std::vector<GateView> views;
  views.reserve(tracks.size());
  for (const auto& t : tracks) {
    if (t.status == TrackStatus::Deleted) continue;
    const ModelEstimate c = t.state.combined();
    views.push_back({t.track_id, c.x.head<4>(), c.P.topLeftCorner<4, 4>(), t.extent.X});
  }

  std::vector<std::size_t> ungated;
  for (std::size_t j = 0; j < scan.detections.size(); ++j) {
    const Detection& det = scan.detections[j];
    std::optional<std::pair<double, TrackId>> best;
    for (const auto& v : views) {
      double d2 = 0.0;
      try {
        d2 = gate_distance_sq(det, v.x, v.P, v.X, cfg.extent_scale, scan.ego);
      } catch (const DegenerateMatrixError&) {
        continue;
      }
      if (d2 > threshold) continue;
      const std::pair<double, TrackId> cand{d2, v.id};
      if (!best || cand < *best) best = cand;
    }
    if (best) {
      out.assigned[best->second].push_back(det.id);
    } else {
      ungated.push_back(j);
    }
  }

  DisjointSets sets(ungated.size());
  const double r2 = cfg.cluster_radius * cfg.cluster_radius;
  for (std::size_t a = 0; a < ungated.size(); ++a) {
    const Vec2 pa = scan.detections[ungated[a]].position();
    for (std::size_t b = a + 1; b < ungated.size(); ++b) {
      if ((scan.detections[ungated[b]].position() - pa).squaredNorm() <= r2) sets.unite(a, b);
    }
  }
  std::map<std::size_t, std::vector<DetId>> clusters;
  for (std::size_t a = 0; a < ungated.size(); ++a) {
    clusters[sets.find(a)].push_back(scan.detections[ungated[a]].id);
  }
  for (auto& [root, ids] : clusters) {
    if (static_cast<int>(ids.size()) < cfg.min_cluster_size) continue;
    out.leftover.push_back(std::move(ids));
  }
  out.born.assign(out.leftover.size(), -1);
  return out;
}

namespace {

void record_count(TrackHypothesis& t, std::int64_t k, int n) {
  const std::int64_t index = k - t.birth_k;
  if (index < static_cast<std::int64_t>(t.assoc_counts.size())) {
    throw ValidationError("track " + std::to_string(t.track_id) + " already recorded scan " +
                          std::to_string(k));
  }
  t.assoc_counts.resize(static_cast<std::size_t>(index), 0);
  t.assoc_counts.push_back(n);
}

}  // namespace

TrackHypothesis update_track(const TrackHypothesis& track, std::span<const Detection> assigned,
                             const EgoPose& ego, std::int64_t k, const TrackerConfig& cfg) {
  if (assigned.empty()) throw ValidationError("update_track needs at least one detection");
  TrackHypothesis out = track;
  const ModelEstimate prior = track.state.combined();
  const Vec2 position = prior.x.head<2>();
  const MeasurementGeometry g = geometry_for(ego, position);
  const CentroidMeasurement m = centroid_measurement(assigned, track.extent.X, cfg.extent_scale,
                                                     range_rate_gradient(prior.x.head<4>(), g));
  out.state = imm_update(track.state, m, g, cfg.imm.kappa);
  out.extent = update_extent(track.extent, position, prior.P.topLeftCorner<2, 2>(), m,
                             cfg.min_extent_eig, cfg.max_extent_eig);
  record_count(out, k, m.n);
  out.last_k = k;
  return out;
}

TrackHypothesis initiate_track(TrackId id, std::span<const Detection> cluster, const EgoPose& ego,
                               std::int64_t k, const TrackerConfig& cfg) {
  if (cluster.empty()) throw ValidationError("cannot start a track from an empty cluster");
  const auto n = static_cast<double>(cluster.size());
  CentroidMeasurement m = centroid_measurement(cluster, cfg.initial_extent * Mat2::Identity(),
                                               cfg.extent_scale);
  Mat2 X0 = cfg.initial_extent * Mat2::Identity();
  if (cluster.size() >= 2) {
    X0 = clamp_eigenvalues(m.scatter / (n * cfg.extent_scale), cfg.initial_extent,
                           cfg.max_extent_eig);
    m = centroid_measurement(cluster, X0, cfg.extent_scale);
  }

  const Vec2 centroid = m.z.head<2>();
  const MeasurementGeometry g = geometry_for(ego, centroid);
  Vec2 u = centroid - g.sensor;
  if (u.norm() < 1e-9) {
    u = Vec2::UnitX();
  } else {
    u.normalize();
  }
  const Vec2 t(-u.y(), u.x());
  const double radial_speed = m.z(2) + g.ego_velocity.dot(u);

  StateVec x = StateVec::Zero();
  x.head<2>() = centroid;
  x.segment<2>(2) = radial_speed * u;
  StateCov P = StateCov::Zero();
  P.topLeftCorner<2, 2>() = m.R.topLeftCorner<2, 2>();
  const double sigma_t = cfg.init_tangential_sigma;
  P.block<2, 2>(2, 2) = m.R(2, 2) * u * u.transpose() + sigma_t * sigma_t * t * t.transpose();
  P(4, 4) = cfg.init_turn_sigma * cfg.init_turn_sigma;

  TrackHypothesis track;
  track.track_id = id;
  track.state.models.assign(cfg.imm.models.size(), ModelEstimate{x, P});
  track.state.mu = cfg.initial_mu;
  track.extent = Extent{X0, cfg.initial_nu};
  track.status = TrackStatus::Initialized;
  track.birth_k = k;
  track.last_k = k;
  track.assoc_counts = {static_cast<int>(cluster.size())};
  check_state(track.state, "track initiation");
  return track;
}

namespace {

TrackStatus advance_status(TrackStatus current, const TrackHypothesis& t, const TrackerConfig& cfg) {
  if (current == TrackStatus::Deleted) return current;
  if (t.trailing_misses() >= cfg.max_misses) return TrackStatus::Deleted;
  const bool window_ok = t.hits_in_window(cfg.confirm_n) >= cfg.confirm_m;
  if (current == TrackStatus::Initialized && window_ok) current = TrackStatus::Unconfident;
  if (current == TrackStatus::Unconfident && window_ok && t.total_hits() >= cfg.verify_hits) {
    current = TrackStatus::Verified;
  }
  return current;
}

}  // namespace

TrackStatus status_after(std::span<const int> assoc_counts, const TrackerConfig& cfg) {
  TrackHypothesis probe;
  TrackStatus status = TrackStatus::Initialized;
  for (int c : assoc_counts) {
    probe.assoc_counts.push_back(c);
    status = advance_status(status, probe, cfg);
  }
  return status;
}

void manage_tracks(std::vector<TrackHypothesis>& tracks, ScanAssociation& assoc,
                   const RadarScan& scan, const TrackerConfig& cfg, TrackId& next_id) {
  for (auto& t : tracks) {
    if (t.status == TrackStatus::Deleted) continue;
    if (t.current_k() < scan.k) record_count(t, scan.k, 0);
    t.status = advance_status(t.status, t, cfg);
  }

  assoc.born.assign(assoc.leftover.size(), -1);
  for (std::size_t i = 0; i < assoc.leftover.size(); ++i) {
    const auto& ids = assoc.leftover[i];
    if (ids.size() < 2 && !cfg.low_confidence_tracks) continue;
    std::vector<Detection> cluster;
    cluster.reserve(ids.size());
    for (DetId id : ids) {
      const Detection* d = scan.find(id);
      if (d == nullptr) throw ValidationError("leftover cluster references unknown detection");
      cluster.push_back(*d);
    }
    TrackHypothesis t = initiate_track(next_id, cluster, scan.ego, scan.k, cfg);
    t.status = advance_status(t.status, t, cfg);
    assoc.born[i] = next_id;
    ++next_id;
    tracks.push_back(std::move(t));
  }
}

namespace {

TrackSnapshot snapshot_of(const TrackHypothesis& t, std::int64_t k) {
  TrackSnapshot s;
  s.k = k;
  s.status = t.status;
  s.state = t.state;
  s.extent = t.extent;
  const std::int64_t index = k - t.birth_k;
  s.n_assoc = index >= 0 && index < static_cast<std::int64_t>(t.assoc_counts.size())
                  ? t.assoc_counts[static_cast<std::size_t>(index)]
                  : 0;
  return s;
}

std::vector<Detection> gather(const RadarScan& scan, const std::vector<DetId>& ids) {
  std::vector<Detection> out;
  out.reserve(ids.size());
  for (DetId id : ids) {
    const Detection* d = scan.find(id);
    if (d == nullptr) throw ValidationError("association references unknown detection");
    out.push_back(*d);
  }
  return out;
}

}  // namespace

HypothesisSet run_eot(const Recording& recording, const TrackerConfig& cfg) {
  cfg.validate();
  HypothesisSet out;
  std::vector<TrackHypothesis> alive;
  TrackId next_id = 0;
  double t_prev = 0.0;

  auto fail = [&](TrackHypothesis& t, std::int64_t k, const std::string& what) {
    t.failed = true;
    t.failure = what;
    t.status = TrackStatus::Deleted;
    out.log.push_back("scan " + std::to_string(k) + ": track " + std::to_string(t.track_id) +
                      " numerical failure: " + what);
  };

  for (const RadarScan& scan : recording.scans) {
    const double dt = alive.empty() ? 0.0 : scan.t - t_prev;
    for (auto& t : alive) {
      try {
        t = predict_track(t, dt, cfg);
      } catch (const NumericalFailure& e) {
        fail(t, scan.k, e.what());
      }
    }

    ScanAssociation assoc = adaptive_cluster(scan, alive, cfg);
    for (auto& t : alive) {
      auto it = assoc.assigned.find(t.track_id);
      if (it == assoc.assigned.end() || t.status == TrackStatus::Deleted) continue;
      try {
        t = update_track(t, gather(scan, it->second), scan.ego, scan.k, cfg);
      } catch (const NumericalFailure& e) {
        fail(t, scan.k, e.what());
      }
    }

    const std::size_t before = alive.size();
    manage_tracks(alive, assoc, scan, cfg, next_id);
    for (std::size_t i = before; i < alive.size(); ++i) {
      out.tracks.push_back(TrackRecord{alive[i].track_id, {}, false, {}});
    }

    for (auto& t : alive) {
      TrackRecord& rec = out.tracks[static_cast<std::size_t>(t.track_id)];
      rec.history.push_back(snapshot_of(t, scan.k));
      rec.failed = t.failed;
      rec.failure = t.failure;
    }
    std::erase_if(alive, [](const TrackHypothesis& t) { return t.status == TrackStatus::Deleted; });

    out.associations.push_back(std::move(assoc));
    t_prev = scan.t;
  }
  return out;
}

}  // namespace baas
