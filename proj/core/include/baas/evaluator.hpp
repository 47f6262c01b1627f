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

#include "baas/tracker.hpp"
#include "baas/types.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace baas {

/// Per-detection labels: scan index -> detection id -> object id.
using DetectionLabels = std::map<std::int64_t, std::map<DetId, ObjectId>>;

/// Object states per scan, the common input of track matching.
struct EstimateEntry {
  ObjectId id = 0;
  Vec4 x = Vec4::Zero();  // (x, y, vx, vy)
};
using EstimateSeries = std::vector<std::vector<EstimateEntry>>;

struct LabelTrackingResult {
  HypothesisSet hypotheses;       // one track per labeled object, id = object id
  std::vector<ObjectId> missed;   // objects that never reach verified status
};

/// Re-runs the tracker filter with association fixed by the manual labels.
LabelTrackingResult label_data_tracking(const Recording& recording, const ManualLabelSet& labels,
                                        const TrackerConfig& cfg);

/// States of every track from birth to its last hit, optionally only tracks
/// that reached verified status.
EstimateSeries series_from_tracks(const HypothesisSet& hypotheses, std::size_t scan_count,
                                  bool verified_only = false);
EstimateSeries series_from_trajectories(std::span<const ObjectTrajectory> trajectories,
                                        std::size_t scan_count);

struct MatchPair {
  ObjectId est = 0;
  ObjectId gt = 0;
  Vec4 error = Vec4::Zero();
};

struct ScanMatch {
  std::int64_t k = 0;
  std::vector<MatchPair> pairs;
  int fp = 0;
  int fn = 0;
  int mm = 0;
  int tp = 0;
};

struct MatchEventLog {
  std::vector<ScanMatch> scans;

  long total_fp() const;
  long total_fn() const;
  long total_mm() const;
  long total_tp() const;
  long total_matches() const;
};

/// CLEAR-MOT correspondence per scan with a position gate in meters.
MatchEventLog match_tracks(const EstimateSeries& est, const EstimateSeries& gt, double gate_dist);

double mota(const MatchEventLog& log);
double motp(const MatchEventLog& log);

/// est id -> gt id by the most frequent pairing (ties: lower gt id).
std::map<ObjectId, ObjectId> majority_mapping(const MatchEventLog& log);

struct ConfusionCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;

  long total() const { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o);
  bool operator==(const ConfusionCounts&) const = default;
};

/// Detection-level confusion. Predicted ids are mapped through `id_map`; an
/// empty map means identity, and ids missing from a non-empty map never equal
/// a truth object. Clutter labels (-1) count as unlabeled; a detection labeled
/// with different objects in both sets is a false positive.
ConfusionCounts confusion(const Recording& recording, const DetectionLabels& predicted,
                          const ManualLabelSet& truth,
                          const std::map<ObjectId, ObjectId>& id_map = {});

/// Per-scan confusion counts, in scan order.
std::vector<ConfusionCounts> confusion_per_scan(const Recording& recording,
                                                const DetectionLabels& predicted,
                                                const ManualLabelSet& truth,
                                                const std::map<ObjectId, ObjectId>& id_map = {});

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;             // harmonic mean
  double f1_arithmetic = 0.0;  // (P + R) / 2
};

PrecisionRecall precision_recall_f1(const ConfusionCounts& c);

}  // namespace baas
