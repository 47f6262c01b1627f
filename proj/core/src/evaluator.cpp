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

#include "baas/evaluator.hpp"

#include "baas/assignment.hpp"
#include "baas/error.hpp"
#include "baas/smoother.hpp"

#include <algorithm>
#include <set>

namespace baas {

LabelTrackingResult label_data_tracking(const Recording& recording, const ManualLabelSet& labels,
                                        const TrackerConfig& cfg) {
  cfg.validate();
  // object -> scan -> labeled detections
  std::map<ObjectId, std::map<std::int64_t, std::vector<DetId>>> per_object;
  for (const ScanLabels& sl : labels.scans) {
    if (sl.k < 0 || static_cast<std::size_t>(sl.k) >= recording.scans.size()) {
      throw ValidationError("labels reference scan " + std::to_string(sl.k) +
                            " outside the recording");
    }
    const RadarScan& scan = recording.scans[static_cast<std::size_t>(sl.k)];
    for (const auto& [det, obj] : sl.labels) {
      if (scan.find(det) == nullptr) {
        throw ValidationError("labels reference detection " + std::to_string(det) +
                              " missing from scan " + std::to_string(sl.k));
      }
      if (obj == kClutterObject) continue;
      per_object[obj][sl.k].push_back(det);
    }
  }

  LabelTrackingResult out;
  out.hypotheses.associations.resize(recording.scans.size());
  for (std::size_t k = 0; k < recording.scans.size(); ++k) {
    out.hypotheses.associations[k].k = static_cast<std::int64_t>(k);
  }

  for (const auto& [obj, scans] : per_object) {
    const std::int64_t first = scans.begin()->first;
    const std::int64_t last = scans.rbegin()->first;
    std::vector<MeasurementFrame> frames;
    for (std::int64_t k = first; k <= last; ++k) {
      const RadarScan& scan = recording.scans[static_cast<std::size_t>(k)];
      MeasurementFrame f{k, scan.t, scan.ego, {}};
      if (auto it = scans.find(k); it != scans.end()) {
        for (DetId id : it->second) f.detections.push_back(*scan.find(id));
        out.hypotheses.associations[static_cast<std::size_t>(k)].assigned[obj] = it->second;
      }
      frames.push_back(std::move(f));
    }

    TrackRecord rec;
    rec.track_id = obj;
    try {
      const std::vector<ForwardStep> steps = forward_filter(frames, cfg);
      std::vector<int> counts;
      for (const ForwardStep& s : steps) {
        counts.push_back(s.n_assoc);
        rec.history.push_back({s.k, status_after(counts, cfg), s.filtered, s.extent, s.n_assoc});
      }
    } catch (const NumericalFailure& e) {
      rec.failed = true;
      rec.failure = e.what();
      out.hypotheses.log.push_back("object " + std::to_string(obj) + ": " + e.what());
    }
    if (rec.history.empty() || !rec.ever(TrackStatus::Verified)) out.missed.push_back(obj);
    if (!rec.history.empty()) out.hypotheses.tracks.push_back(std::move(rec));
  }
  return out;
}

EstimateSeries series_from_tracks(const HypothesisSet& hypotheses, std::size_t scan_count,
                                  bool verified_only) {
  EstimateSeries out(scan_count);
  for (const TrackRecord& rec : hypotheses.tracks) {
    if (rec.history.empty()) continue;
    if (verified_only && !rec.ever(TrackStatus::Verified)) continue;
    const std::int64_t last = rec.last_hit_k();
    for (const TrackSnapshot& s : rec.history) {
      if (s.k > last) break;
      if (s.k < 0 || static_cast<std::size_t>(s.k) >= scan_count) continue;
      out[static_cast<std::size_t>(s.k)].push_back({rec.track_id, s.state.mean4()});
    }
  }
  return out;
}

EstimateSeries series_from_trajectories(std::span<const ObjectTrajectory> trajectories,
                                        std::size_t scan_count) {
  EstimateSeries out(scan_count);
  for (const ObjectTrajectory& traj : trajectories) {
    for (const TrajectoryState& s : traj.states) {
      if (s.k < 0 || static_cast<std::size_t>(s.k) >= scan_count) continue;
      out[static_cast<std::size_t>(s.k)].push_back({traj.object_id, s.x});
    }
  }
  for (auto& scan : out) {
    std::sort(scan.begin(), scan.end(),
              [](const EstimateEntry& a, const EstimateEntry& b) { return a.id < b.id; });
  }
  return out;
}

long MatchEventLog::total_fp() const {
  long n = 0;
  for (const auto& s : scans) n += s.fp;
  return n;
}
long MatchEventLog::total_fn() const {
  long n = 0;
  for (const auto& s : scans) n += s.fn;
  return n;
}
long MatchEventLog::total_mm() const {
  long n = 0;
  for (const auto& s : scans) n += s.mm;
  return n;
}
long MatchEventLog::total_tp() const {
  long n = 0;
  for (const auto& s : scans) n += s.tp;
  return n;
}
long MatchEventLog::total_matches() const {
  long n = 0;
  for (const auto& s : scans) n += static_cast<long>(s.pairs.size());
  return n;
}

MatchEventLog match_tracks(const EstimateSeries& est, const EstimateSeries& gt, double gate_dist) {
  if (est.size() != gt.size()) {
    throw ValidationError("estimate and ground truth cover different scan ranges");
  }
  MatchEventLog log;
  log.scans.resize(gt.size());
  std::map<ObjectId, ObjectId> last_match;  // gt -> est

  for (std::size_t k = 0; k < gt.size(); ++k) {
    std::vector<EstimateEntry> g = gt[k];
    std::vector<EstimateEntry> e = est[k];
    auto by_id = [](const EstimateEntry& a, const EstimateEntry& b) { return a.id < b.id; };
    std::sort(g.begin(), g.end(), by_id);
    std::sort(e.begin(), e.end(), by_id);

    ScanMatch& sm = log.scans[k];
    sm.k = static_cast<std::int64_t>(k);
    std::vector<char> g_used(g.size(), 0);
    std::vector<char> e_used(e.size(), 0);
    auto dist = [&](std::size_t gi, std::size_t ei) {
      return (e[ei].x.head<2>() - g[gi].x.head<2>()).norm();
    };
    auto add_pair = [&](std::size_t gi, std::size_t ei) {
      g_used[gi] = 1;
      e_used[ei] = 1;
      sm.pairs.push_back({e[ei].id, g[gi].id, e[ei].x - g[gi].x});
    };

    // Keep correspondences that are still valid.
    for (std::size_t gi = 0; gi < g.size(); ++gi) {
      auto it = last_match.find(g[gi].id);
      if (it == last_match.end()) continue;
      for (std::size_t ei = 0; ei < e.size(); ++ei) {
        if (e[ei].id != it->second || e_used[ei]) continue;
        if (dist(gi, ei) <= gate_dist) add_pair(gi, ei);
        break;
      }
    }

    std::vector<std::size_t> g_free;
    std::vector<std::size_t> e_free;
    for (std::size_t gi = 0; gi < g.size(); ++gi) {
      if (!g_used[gi]) g_free.push_back(gi);
    }
    for (std::size_t ei = 0; ei < e.size(); ++ei) {
      if (!e_used[ei]) e_free.push_back(ei);
    }
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(g_free.size()),
                         static_cast<Eigen::Index>(e_free.size()));
    for (std::size_t a = 0; a < g_free.size(); ++a) {
      for (std::size_t b = 0; b < e_free.size(); ++b) {
        cost(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = dist(g_free[a], e_free[b]);
      }
    }
    for (const auto& [a, b] : min_cost_assignment(cost, gate_dist)) {
      const std::size_t gi = g_free[static_cast<std::size_t>(a)];
      const std::size_t ei = e_free[static_cast<std::size_t>(b)];
      auto it = last_match.find(g[gi].id);
      if (it != last_match.end() && it->second != e[ei].id) ++sm.mm;
      add_pair(gi, ei);
    }
    for (const MatchPair& p : sm.pairs) last_match[p.gt] = p.est;
    std::sort(sm.pairs.begin(), sm.pairs.end(), [](const MatchPair& a, const MatchPair& b) {
      return std::pair(a.gt, a.est) < std::pair(b.gt, b.est);
    });

    sm.tp = static_cast<int>(sm.pairs.size());
    sm.fn = static_cast<int>(g.size()) - sm.tp;
    sm.fp = static_cast<int>(e.size()) - sm.tp;
  }
  return log;
}

double mota(const MatchEventLog& log) {
  const long tp = log.total_tp();
  if (tp == 0) throw DomainError("MOTA is undefined without true positives");
  return 1.0 - static_cast<double>(log.total_fn() + log.total_fp() + log.total_mm()) /
                   static_cast<double>(tp);
}

double motp(const MatchEventLog& log) {
  const long matches = log.total_matches();
  if (matches == 0) throw DomainError("MOTP is undefined without matches");
  double sum = 0.0;
  for (const auto& s : log.scans) {
    for (const auto& p : s.pairs) sum += p.error.norm();
  }
  return sum / static_cast<double>(matches);
}

std::map<ObjectId, ObjectId> majority_mapping(const MatchEventLog& log) {
  std::map<ObjectId, std::map<ObjectId, long>> votes;
  for (const auto& s : log.scans) {
    for (const auto& p : s.pairs) ++votes[p.est][p.gt];
  }
  std::map<ObjectId, ObjectId> out;
  for (const auto& [est, tally] : votes) {
    ObjectId best = tally.begin()->first;
    long best_n = tally.begin()->second;
    for (const auto& [gt, n] : tally) {
      if (n > best_n) {
        best = gt;
        best_n = n;
      }
    }
    out[est] = best;
  }
  return out;
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

std::vector<ConfusionCounts> confusion_per_scan(const Recording& recording,
                                                const DetectionLabels& predicted,
                                                const ManualLabelSet& truth,
                                                const std::map<ObjectId, ObjectId>& id_map) {
  std::vector<ConfusionCounts> out(recording.scans.size());
  for (std::size_t i = 0; i < recording.scans.size(); ++i) {
    const RadarScan& scan = recording.scans[i];
    const ScanLabels* t = truth.find(scan.k);
    auto p_it = predicted.find(scan.k);
    const std::map<DetId, ObjectId>* p = p_it == predicted.end() ? nullptr : &p_it->second;
    ConfusionCounts& c = out[i];
    for (const Detection& d : scan.detections) {
      ObjectId truth_obj = kClutterObject;
      if (t != nullptr) {
        if (auto it = t->labels.find(d.id); it != t->labels.end()) truth_obj = it->second;
      }
      ObjectId pred_obj = kClutterObject;
      if (p != nullptr) {
        if (auto it = p->find(d.id); it != p->end() && it->second != kClutterObject) {
          pred_obj = it->second;
          if (auto m = id_map.find(pred_obj); m != id_map.end()) pred_obj = m->second;
          else if (!id_map.empty()) pred_obj = kClutterObject - 1;  // unmatched object
        }
      }
      const bool has_truth = truth_obj != kClutterObject;
      const bool has_pred = pred_obj != kClutterObject;
      if (has_truth && has_pred) {
        if (truth_obj == pred_obj) ++c.tp;
        else ++c.fp;
      } else if (has_pred) {
        ++c.fp;
      } else if (has_truth) {
        ++c.fn;
      } else {
        ++c.tn;
      }
    }
  }
  return out;
}

ConfusionCounts confusion(const Recording& recording, const DetectionLabels& predicted,
                          const ManualLabelSet& truth, const std::map<ObjectId, ObjectId>& id_map) {
  ConfusionCounts total;
  for (const auto& c : confusion_per_scan(recording, predicted, truth, id_map)) total += c;
  return total;
}

PrecisionRecall precision_recall_f1(const ConfusionCounts& c) {
  PrecisionRecall out;
  out.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  out.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  const double sum = out.precision + out.recall;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  out.f1_arithmetic = 0.5 * sum;
  return out;
}

}  // namespace baas
