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

#include <map>
#include <span>
#include <string>
#include <vector>

namespace baas {

struct TrackerConfig {
  ImmParams imm;
  Eigen::VectorXd initial_mu;

  double extent_scale = 0.25;  // z: spread of a uniform ellipse
  double rmm_tau = 2.0;        // s
  double initial_extent = 1.0;  // initial X = initial_extent * I (m^2)
  double initial_nu = 5.0;
  double min_extent_eig = 0.01;
  double max_extent_eig = 100.0;

  double init_tangential_sigma = 5.0;  // m/s, velocity across the line of sight at birth
  double init_turn_sigma = 0.5;        // rad/s

  double cluster_radius = 1.5;  // m, leftover clustering radius
  int min_cluster_size = 1;
  double gate_probability = 0.99;

  int confirm_m = 2;  // initialized -> unconfident: M hits in the last N scans
  int confirm_n = 3;
  int verify_hits = 5;  // unconfident -> verified: total hits, M-of-N still holding
  int max_misses = 5;   // consecutive misses before deletion
  bool low_confidence_tracks = true;  // singleton clusters may start tracks

  static TrackerConfig defaults();
  void validate() const;
  double gate_threshold() const;
};

/// Live track: current estimate plus lifecycle bookkeeping.
struct TrackHypothesis {
  TrackId track_id = 0;
  KinematicState state;
  Extent extent;
  TrackStatus status = TrackStatus::Initialized;
  std::int64_t birth_k = 0;
  std::int64_t last_k = 0;             // last scan with assigned detections
  std::vector<int> assoc_counts;       // nu per scan since birth_k
  bool failed = false;
  std::string failure;

  std::int64_t current_k() const { return birth_k + static_cast<std::int64_t>(assoc_counts.size()) - 1; }
  int total_hits() const;
  int trailing_misses() const;
  int hits_in_window(int n) const;
};

/// Per-scan result of adaptive clustering.
struct ScanAssociation {
  std::int64_t k = 0;
  std::map<TrackId, std::vector<DetId>> assigned;
  std::vector<std::vector<DetId>> leftover;
  std::vector<TrackId> born;  // parallel to leftover; -1 when no track started
};

struct TrackSnapshot {
  std::int64_t k = 0;
  TrackStatus status = TrackStatus::Initialized;
  KinematicState state;
  Extent extent;
  int n_assoc = 0;
};

/// Full history of one hypothesis.
struct TrackRecord {
  TrackId track_id = 0;
  std::vector<TrackSnapshot> history;
  bool failed = false;
  std::string failure;

  std::int64_t birth_k() const { return history.front().k; }
  /// Last scan with assigned detections.
  std::int64_t last_hit_k() const;
  bool ever(TrackStatus s) const;
  const TrackSnapshot* at(std::int64_t k) const;
};

struct HypothesisSet {
  std::vector<TrackRecord> tracks;
  std::vector<ScanAssociation> associations;
  std::vector<std::string> log;

  const TrackRecord* find(TrackId id) const;
  /// Detections attributed to a track at scan k (assignment or birth cluster).
  std::vector<DetId> detections_of(TrackId id, std::int64_t k) const;
};

/// IMM + extent prediction over dt. dt == 0 returns the track unchanged.
TrackHypothesis predict_track(const TrackHypothesis& track, double dt, const TrackerConfig& cfg);

/// Core gating against predicted tracks, then radius clustering of the rest.
ScanAssociation adaptive_cluster(const RadarScan& scan, std::span<const TrackHypothesis> tracks,
                                 const TrackerConfig& cfg);

/// Measurement update with the assigned detections of scan k.
TrackHypothesis update_track(const TrackHypothesis& track, std::span<const Detection> assigned,
                             const EgoPose& ego, std::int64_t k, const TrackerConfig& cfg);

/// Starts a track from a detection cluster.
TrackHypothesis initiate_track(TrackId id, std::span<const Detection> cluster, const EgoPose& ego,
                               std::int64_t k, const TrackerConfig& cfg);

/// Lifecycle step: record misses, promote, delete, and start tracks from
/// leftover clusters. New track ids are taken from `next_id` and written into
/// `assoc.born`.
void manage_tracks(std::vector<TrackHypothesis>& tracks, ScanAssociation& assoc,
                   const RadarScan& scan, const TrackerConfig& cfg, TrackId& next_id);

/// Status a track has after the given per-scan hit counts (used by the
/// lifecycle rule and by label data tracking).
TrackStatus status_after(std::span<const int> assoc_counts, const TrackerConfig& cfg);

HypothesisSet run_eot(const Recording& recording, const TrackerConfig& cfg);

}  // namespace baas
