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

#include "baas/finalizer.hpp"

#include "baas/error.hpp"
#include "baas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>

namespace baas {

bool SupervisionDecision::operator==(const SupervisionDecision& o) const {
  auto same_bounds = [](const SizeBounds& a, const SizeBounds& b) {
    return a.min_length == b.min_length && a.max_length == b.max_length &&
           a.min_width == b.min_width && a.max_width == b.max_width;
  };
  if (accepted != o.accepted || merge_groups != o.merge_groups || classes != o.classes) {
    return false;
  }
  if (size_overrides.size() != o.size_overrides.size()) return false;
  return std::equal(size_overrides.begin(), size_overrides.end(), o.size_overrides.begin(),
                    [&](const auto& a, const auto& b) {
                      return a.first == b.first && same_bounds(a.second, b.second);
                    });
}

std::vector<SupervisedObject> supervised_objects(const SupervisionDecision& decision) {
  std::vector<SupervisedObject> out;
  std::set<TrackId> grouped;
  for (const auto& g : decision.merge_groups) {
    if (g.empty()) continue;
    SupervisedObject obj;
    obj.track_ids = g;
    std::sort(obj.track_ids.begin(), obj.track_ids.end());
    obj.track_ids.erase(std::unique(obj.track_ids.begin(), obj.track_ids.end()),
                        obj.track_ids.end());
    obj.object_id = obj.track_ids.front();
    grouped.insert(obj.track_ids.begin(), obj.track_ids.end());
    out.push_back(std::move(obj));
  }
  std::set<TrackId> singles(decision.accepted.begin(), decision.accepted.end());
  for (TrackId id : singles) {
    if (grouped.contains(id)) continue;
    SupervisedObject obj;
    obj.object_id = id;
    obj.track_ids = {id};
    out.push_back(std::move(obj));
  }
  for (auto& obj : out) {
    if (auto it = decision.classes.find(obj.object_id); it != decision.classes.end()) {
      obj.object_class = it->second;
    }
    if (auto it = decision.size_overrides.find(obj.object_id); it != decision.size_overrides.end()) {
      obj.size_override = it->second;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SupervisedObject& a, const SupervisedObject& b) { return a.object_id < b.object_id; });
  return out;
}

std::vector<std::string> validation_errors(const SupervisionDecision& decision,
                                           const HypothesisSet& hypotheses) {
  std::vector<std::string> errors;
  std::set<TrackId> unknown;
  auto check_known = [&](TrackId id) {
    if (hypotheses.find(id) == nullptr) unknown.insert(id);
  };
  for (TrackId id : decision.accepted) check_known(id);
  std::map<TrackId, int> group_of;
  for (std::size_t g = 0; g < decision.merge_groups.size(); ++g) {
    if (decision.merge_groups[g].empty()) errors.push_back("merge group " + std::to_string(g) + " is empty");
    std::set<TrackId> seen;
    for (TrackId id : decision.merge_groups[g]) {
      check_known(id);
      if (!seen.insert(id).second) continue;
      auto [it, inserted] = group_of.emplace(id, static_cast<int>(g));
      if (!inserted) {
        errors.push_back("track " + std::to_string(id) + " appears in merge groups " +
                         std::to_string(it->second) + " and " + std::to_string(g));
      }
    }
  }
  if (!unknown.empty()) {
    std::string list;
    for (TrackId id : unknown) list += (list.empty() ? "" : ", ") + std::to_string(id);
    errors.insert(errors.begin(), "unknown track ids: " + list);
  }
  if (errors.empty()) {
    std::set<TrackId> object_ids;
    for (const auto& obj : supervised_objects(decision)) {
      object_ids.insert(obj.object_id);
      if (!decision.classes.contains(obj.object_id)) {
        errors.push_back("object " + std::to_string(obj.object_id) + " has no class");
      }
    }
    for (const auto& [id, cls] : decision.classes) {
      if (!object_ids.contains(id)) {
        errors.push_back("class given for " + std::to_string(id) + ", which is not an object key");
      }
    }
    for (const auto& [id, b] : decision.size_overrides) {
      if (!object_ids.contains(id)) {
        errors.push_back("size override for " + std::to_string(id) + ", which is not an object key");
      }
      if (!(b.min_length > 0.0 && b.min_length <= b.max_length && b.min_width > 0.0 &&
            b.min_width <= b.max_width)) {
        errors.push_back("invalid size override for object " + std::to_string(id));
      }
    }
  }
  return errors;
}

void validate(const SupervisionDecision& decision, const HypothesisSet& hypotheses) {
  const auto errors = validation_errors(decision, hypotheses);
  if (errors.empty()) return;
  std::string msg = "invalid supervision decision";
  for (const auto& e : errors) msg += "; " + e;
  throw ValidationError(msg);
}

std::vector<MeasurementFrame> merge_tracks(std::span<const TrackId> group,
                                           const HypothesisSet& hypotheses,
                                           const Recording& recording) {
  if (group.empty()) throw ValidationError("cannot merge an empty track group");
  std::map<std::int64_t, std::set<DetId>> per_scan;
  for (TrackId id : group) {
    const TrackRecord* rec = hypotheses.find(id);
    if (rec == nullptr) throw ValidationError("unknown track id " + std::to_string(id));
    for (const auto& snap : rec->history) {
      for (DetId d : hypotheses.detections_of(id, snap.k)) per_scan[snap.k].insert(d);
    }
  }
  std::erase_if(per_scan, [](const auto& kv) { return kv.second.empty(); });
  std::vector<MeasurementFrame> frames;
  if (per_scan.empty()) return frames;
  const std::int64_t first = per_scan.begin()->first;
  const std::int64_t last = per_scan.rbegin()->first;
  for (std::int64_t k = first; k <= last; ++k) {
    const RadarScan& scan = recording.scan(k);
    MeasurementFrame f{k, scan.t, scan.ego, {}};
    if (auto it = per_scan.find(k); it != per_scan.end()) {
      for (const Detection& d : scan.detections) {
        if (it->second.contains(d.id)) f.detections.push_back(d);
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

double align_orientation(const Vec2& velocity, double eta_v, double prev_alpha) {
  if (velocity.norm() > eta_v) return std::atan2(velocity.y(), velocity.x());
  return prev_alpha;
}

std::pair<double, double> average_extent(std::span<const std::pair<double, double>> lw,
                                         std::span<const double> nu) {
  if (lw.empty() || lw.size() != nu.size()) {
    throw ValidationError("average_extent needs equal, non-empty input lists");
  }
  double total = 0.0;
  for (double n : nu) {
    if (n < 0.0) throw ValidationError("association counts must be non-negative");
    total += n;
  }
  if (!(total > 0.0)) throw ValidationError("association counts sum to zero");
  double l = 0.0;
  double w = 0.0;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    l += nu[i] / total * lw[i].first;
    w += nu[i] / total * lw[i].second;
  }
  return {l, w};
}

std::pair<double, double> clamp_extent(ObjectClass c, double length, double width,
                                       const ClassBounds& bounds) {
  if (keeps_per_scan_extent(c)) return {length, width};
  auto it = bounds.sizes.find(c);
  if (it == bounds.sizes.end()) {
    throw ValidationError("no size bounds for class " + std::string(to_string(c)));
  }
  const SizeBounds& b = it->second;
  return {std::clamp(length, b.min_length, b.max_length), std::clamp(width, b.min_width, b.max_width)};
}

ObjectTrajectory finalize_object(const SupervisedObject& object,
                                 std::span<const MeasurementFrame> frames,
                                 const FinalizerConfig& cfg) {
  const SmoothingResult sm = refilter_and_smooth(frames, cfg.tracker);
  const FinalizeOptions& opt = cfg.options;
  const ObjectClass cls = object.object_class;

  ObjectTrajectory traj;
  traj.object_id = object.object_id;
  traj.object_class = cls;
  traj.k_start = sm.steps.front().k;
  traj.k_end = sm.steps.back().k;
  traj.source_track_ids = object.track_ids;
  traj.states.reserve(sm.steps.size());

  std::vector<std::pair<double, double>> lw;
  std::vector<double> nu;
  double prev_alpha = ellipse_axes(sm.steps.front().extent.X).angle;
  for (const SmoothedStep& step : sm.steps) {
    TrajectoryState s;
    s.k = step.k;
    s.x = step.smoothed.mean4();
    s.P = step.smoothed.cov4();
    s.X = step.extent.X;
    s.n_assoc = step.n_assoc;
    const EllipseAxes axes = ellipse_axes(step.extent.X);
    if (is_rigid(cls) && opt.align) {
      s.alpha = align_orientation(s.x.tail<2>(), cfg.bounds.eta_v, prev_alpha);
    } else {
      s.alpha = axes.angle;
    }
    prev_alpha = s.alpha;
    if (step.n_assoc > 0) {
      lw.emplace_back(axes.length, axes.width);
      nu.push_back(step.n_assoc);
    }
    traj.states.push_back(s);
  }

  if (!keeps_per_scan_extent(cls) && opt.fix_size) {
    auto [l, w] = average_extent(lw, nu);
    if (opt.clamp) {
      ClassBounds bounds = cfg.bounds;
      if (object.size_override) bounds.sizes[cls] = *object.size_override;
      std::tie(l, w) = clamp_extent(cls, l, w, bounds);
    }
    traj.length = l;
    traj.width = w;
    for (auto& s : traj.states) s.X = extent_matrix(l, w, s.alpha);
  }
  return traj;
}

std::vector<ObjectTrajectory> finalize(const SupervisionDecision& decision,
                                       const HypothesisSet& hypotheses, const Recording& recording,
                                       const FinalizerConfig& cfg) {
  validate(decision, hypotheses);
  cfg.tracker.validate();
  cfg.bounds.validate();
  const std::vector<SupervisedObject> objects = supervised_objects(decision);

  std::vector<std::future<std::optional<ObjectTrajectory>>> jobs;
  jobs.reserve(objects.size());
  for (const auto& obj : objects) {
    jobs.push_back(std::async(std::launch::async, [&, obj]() -> std::optional<ObjectTrajectory> {
      const std::vector<MeasurementFrame> frames = merge_tracks(obj.track_ids, hypotheses, recording);
      if (frames.empty()) return std::nullopt;
      return finalize_object(obj, frames, cfg);
    }));
  }
  std::vector<ObjectTrajectory> out;
  for (auto& j : jobs) {
    if (auto traj = j.get()) out.push_back(std::move(*traj));
  }
  return out;
}

}  // namespace baas
