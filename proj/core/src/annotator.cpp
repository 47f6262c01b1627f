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

#include "baas/annotator.hpp"

#include "baas/error.hpp"
#include "baas/gating.hpp"
#include "baas/geometry.hpp"
#include "baas/stats.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

namespace baas {

BorderFn BorderFn::constant(double c) { return BorderFn{Form::Constant, {c}}; }

BorderFn BorderFn::linear(double c0, double c_speed, double c_area, double c_range) {
  return BorderFn{Form::Linear, {c0, c_speed, c_area, c_range}};
}

double BorderFn::operator()(const BorderFeatures& f) const {
  switch (form) {
    case Form::Constant:
      return std::max(0.0, params.at(0));
    case Form::Linear:
      return std::max(0.0, params.at(0) + params.at(1) * f.speed + params.at(2) * f.area +
                               params.at(3) * f.range);
  }
  return 0.0;
}

void BorderFn::validate() const {
  const std::size_t expected = form == Form::Constant ? 1 : 4;
  if (params.size() != expected) {
    throw ValidationError("border function expects " + std::to_string(expected) + " parameters");
  }
  for (double p : params) {
    if (!std::isfinite(p)) throw ValidationError("border function parameters must be finite");
  }
  if (form == Form::Constant && params[0] < 0.0) {
    throw ValidationError("constant border offset must be non-negative");
  }
}

std::string BorderFn::describe() const {
  std::ostringstream os;
  os << (form == Form::Constant ? "constant(" : "linear(");
  for (std::size_t i = 0; i < params.size(); ++i) os << (i ? ", " : "") << params[i];
  os << ")";
  return os.str();
}

BorderFeatures border_features(const TrajectoryState& s, const EgoPose& ego) {
  const Vec2 p = s.x.head<2>();
  BorderFeatures f;
  f.speed = s.x.tail<2>().norm();
  f.area = std::numbers::pi * std::sqrt(std::max(0.0, s.X.determinant()));
  f.range = (p - nearest_sensor_position(ego, p)).norm();
  return f;
}

Vec3 pseudo_measurement(const ObjectTrajectory& traj, std::int64_t k, const EgoPose& ego) {
  const TrajectoryState* s = traj.at(k);
  if (s == nullptr) {
    throw ValidationError("scan " + std::to_string(k) + " outside the lifespan of object " +
                          std::to_string(traj.object_id));
  }
  return pseudo_measurement(s->x, ego);
}

namespace {

std::vector<AnnotationRecord> annotate_scan_logged(std::span<const ObjectTrajectory> trajectories,
                                                   const RadarScan& scan, const AnnotatorConfig& cfg,
                                                   std::vector<std::string>* log) {
  const double core = chi2_quantile(3, cfg.alpha);
  std::vector<AnnotationRecord> out;
  for (const ObjectTrajectory& traj : trajectories) {
    const TrajectoryState* s = traj.at(scan.k);
    if (s == nullptr) continue;
    const double eta = cfg.border(border_features(*s, scan.ego));
    for (const Detection& det : scan.detections) {
      double d2 = 0.0;
      try {
        d2 = gate_distance_sq(det, s->x, s->P, s->X, cfg.extent_scale, scan.ego);
      } catch (const DegenerateMatrixError& e) {
        if (log != nullptr) {
          log->push_back("scan " + std::to_string(scan.k) + ", detection " + std::to_string(det.id) +
                         ", object " + std::to_string(traj.object_id) + ": " + e.what());
        }
        continue;
      }
      if (d2 <= core) {
        out.push_back({scan.k, det.id, traj.object_id, 1.0, Region::Core, d2});
      } else if (d2 <= core + eta) {
        const double rho = std::exp(-(d2 - core) / std::max(eta, cfg.rho_floor_scale));
        out.push_back({scan.k, det.id, traj.object_id, rho, Region::Border, d2});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const AnnotationRecord& a, const AnnotationRecord& b) {
    return std::tie(a.det_id, a.object_id) < std::tie(b.det_id, b.object_id);
  });
  return out;
}

}  // namespace

std::vector<AnnotationRecord> annotate_scan(std::span<const ObjectTrajectory> trajectories,
                                            const RadarScan& scan, const AnnotatorConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw DomainError("annotation alpha must lie in (0, 1)");
  cfg.border.validate();
  return annotate_scan_logged(trajectories, scan, cfg, nullptr);
}

std::map<DetId, ObjectId> binary_labels(std::span<const AnnotationRecord> records) {
  std::map<DetId, const AnnotationRecord*> best;
  for (const AnnotationRecord& r : records) {
    auto [it, inserted] = best.emplace(r.det_id, &r);
    if (inserted) continue;
    const AnnotationRecord& b = *it->second;
    const bool better = r.rho > b.rho || (r.rho == b.rho && r.d2 < b.d2) ||
                        (r.rho == b.rho && r.d2 == b.d2 && r.object_id < b.object_id);
    if (better) it->second = &r;
  }
  std::map<DetId, ObjectId> out;
  for (const auto& [det, r] : best) out[det] = r->object_id;
  return out;
}

AnnotationSet annotate_recording(std::span<const ObjectTrajectory> trajectories,
                                 const Recording& recording, const AnnotatorConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw DomainError("annotation alpha must lie in (0, 1)");
  cfg.border.validate();
  const std::size_t n = recording.scans.size();
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(
                                                           std::thread::hardware_concurrency(), 8));
  std::vector<std::vector<AnnotationRecord>> per_scan(n);
  std::vector<std::vector<std::string>> logs(workers);
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        per_scan[i] = annotate_scan_logged(trajectories, recording.scans[i], cfg, &logs[w]);
      }
    }));
  }
  for (auto& j : jobs) j.get();

  AnnotationSet out;
  out.config = cfg;
  for (auto& records : per_scan) {
    out.records.insert(out.records.end(), records.begin(), records.end());
  }
  for (auto& l : logs) out.log.insert(out.log.end(), l.begin(), l.end());
  std::sort(out.log.begin(), out.log.end());
  return out;
}

DetectionLabels binary_labels(const AnnotationSet& set) {
  DetectionLabels out;
  auto it = set.records.begin();
  while (it != set.records.end()) {
    auto end = std::find_if(it, set.records.end(),
                            [k = it->k](const AnnotationRecord& r) { return r.k != k; });
    out[it->k] = binary_labels(std::span<const AnnotationRecord>(&*it, static_cast<std::size_t>(end - it)));
    it = end;
  }
  return out;
}

BorderOptimization optimize_border(const ManualLabelSet& labels,
                                   std::span<const ObjectTrajectory> trajectories,
                                   const Recording& recording, std::span<const BorderFn> candidates,
                                   const AnnotatorConfig& base,
                                   const std::map<ObjectId, ObjectId>& id_map) {
  if (candidates.empty()) throw ValidationError("border optimization needs at least one candidate");
  if (labels.scans.empty()) throw ValidationError("border optimization needs manual labels");

  BorderOptimization out;
  for (const BorderFn& fn : candidates) {
    AnnotatorConfig cfg = base;
    cfg.border = fn;
    const AnnotationSet set = annotate_recording(trajectories, recording, cfg);
    BorderScore score;
    score.border = fn;
    score.counts = confusion(recording, binary_labels(set), labels, id_map);
    score.scores = precision_recall_f1(score.counts);
    double eta_sum = 0.0;
    std::size_t eta_n = 0;
    for (const ObjectTrajectory& traj : trajectories) {
      for (const TrajectoryState& s : traj.states) {
        if (s.k < 0 || static_cast<std::size_t>(s.k) >= recording.scans.size()) continue;
        eta_sum += fn(border_features(s, recording.scans[static_cast<std::size_t>(s.k)].ego));
        ++eta_n;
      }
    }
    score.mean_eta = eta_n > 0 ? eta_sum / static_cast<double>(eta_n) : fn(BorderFeatures{});
    out.table.push_back(std::move(score));
  }
  const BorderScore* best = &out.table.front();
  for (const BorderScore& s : out.table) {
    if (s.scores.f1 > best->scores.f1 ||
        (s.scores.f1 == best->scores.f1 && s.mean_eta < best->mean_eta)) {
      best = &s;
    }
  }
  out.best = best->border;
  return out;
}

}  // namespace baas
