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


#include "baas/error.hpp"
#include "baas/finalizer.hpp"
#include "baas/geometry.hpp"
#include "baas/session.hpp"
#include "baas/synth.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <numbers>

namespace baas {
namespace {

TEST(AlignOrientation, Examples) {
  EXPECT_DOUBLE_EQ(align_orientation(Vec2(2, 0), 1.0, 0.3), 0.0);
  EXPECT_NEAR(align_orientation(Vec2(1, 1), 1.0, 0.3), std::numbers::pi / 4, 1e-15);
  EXPECT_DOUBLE_EQ(align_orientation(Vec2(0.3, 0.3), 1.0, 0.7), 0.7);
}

TEST(AlignOrientation, ScaleInvariant) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> v(-10, 10), s(1.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    Vec2 vel(v(rng), v(rng));
    if (vel.norm() <= 1.0) vel = vel.normalized() * 1.5;
    const double a = align_orientation(vel, 1.0, 0.0);
    EXPECT_NEAR(align_orientation(s(rng) * vel, 1.0, 0.0), a, 1e-12);
  }
}

TEST(AverageExtent, Examples) {
  using LW = std::pair<double, double>;
  const std::vector<LW> same = {{4, 2}, {4, 2}, {4, 2}};
  const std::vector<double> n123 = {1, 2, 3};
  auto r = average_extent(same, n123);
  EXPECT_NEAR(r.first, 4.0, 1e-15);
  EXPECT_NEAR(r.second, 2.0, 1e-15);

  const std::vector<LW> two = {{3, 1}, {5, 3}};
  const std::vector<double> n11 = {1, 1};
  r = average_extent(two, n11);
  EXPECT_DOUBLE_EQ(r.first, 4.0);
  EXPECT_DOUBLE_EQ(r.second, 2.0);

  const std::vector<LW> hand = {{3, 1}, {6, 2}};
  const std::vector<double> n12 = {1, 2};
  r = average_extent(hand, n12);
  EXPECT_NEAR(r.first, 5.0, 1e-12);
  EXPECT_NEAR(r.second, 5.0 / 3.0, 1e-12);

  const std::vector<double> zeros = {0, 0};
  EXPECT_THROW(average_extent(two, zeros), ValidationError);
}

TEST(AverageExtent, ConvexBounds) {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> len(0.1, 20), w(0.0, 10);
  std::uniform_int_distribution<int> n(1, 12);
  for (int i = 0; i < 1000; ++i) {
    const int m = n(rng);
    std::vector<std::pair<double, double>> lw;
    std::vector<double> nu;
    for (int j = 0; j < m; ++j) {
      lw.emplace_back(len(rng), len(rng));
      nu.push_back(w(rng) + (j == 0 ? 0.1 : 0.0));
    }
    const auto [l, wd] = average_extent(lw, nu);
    double lmin = 1e9, lmax = -1e9, wmin = 1e9, wmax = -1e9;
    for (const auto& [a, b] : lw) {
      lmin = std::min(lmin, a);
      lmax = std::max(lmax, a);
      wmin = std::min(wmin, b);
      wmax = std::max(wmax, b);
    }
    EXPECT_GE(l, lmin - 1e-12);
    EXPECT_LE(l, lmax + 1e-12);
    EXPECT_GE(wd, wmin - 1e-12);
    EXPECT_LE(wd, wmax + 1e-12);
  }
}

TEST(ClampExtent, Examples) {
  const ClassBounds b = ClassBounds::defaults();
  EXPECT_EQ(clamp_extent(ObjectClass::Car, 8.0, 1.8, b), std::make_pair(5.5, 1.8));
  EXPECT_EQ(clamp_extent(ObjectClass::Pedestrian, 0.5, 0.5, b), std::make_pair(0.5, 0.5));
  EXPECT_EQ(clamp_extent(ObjectClass::PedestrianGroup, 4.0, 3.0, b), std::make_pair(4.0, 3.0));
  ClassBounds missing = b;
  missing.sizes.erase(ObjectClass::Truck);
  EXPECT_THROW(clamp_extent(ObjectClass::Truck, 8.0, 2.5, missing), ValidationError);
}

// Hand-built hypothesis set: one detection per scan per track.
struct Fixture {
  Recording recording;
  HypothesisSet hypotheses;

  void add_track(TrackId id, std::int64_t k0, std::int64_t k1, double y) {
    TrackRecord rec;
    rec.track_id = id;
    for (std::int64_t k = k0; k <= k1; ++k) {
      RadarScan& scan = recording.scans[static_cast<std::size_t>(k)];
      const DetId det = static_cast<DetId>(scan.detections.size());
      scan.detections.push_back(testing::make_detection(det, 10.0 + 0.5 * static_cast<double>(k), y, 0.0));
      TrackSnapshot snap;
      snap.k = k;
      snap.n_assoc = 1;
      rec.history.push_back(snap);
      hypotheses.associations[static_cast<std::size_t>(k)].assigned[id].push_back(det);
    }
    hypotheses.tracks.push_back(rec);
  }

  explicit Fixture(int scans) {
    for (int k = 0; k < scans; ++k) {
      RadarScan s;
      s.k = k;
      s.t = 0.1 * k;
      recording.scans.push_back(s);
      ScanAssociation a;
      a.k = k;
      hypotheses.associations.push_back(a);
    }
  }
};

TEST(MergeTracks, SingleTrackIsIdentity) {
  Fixture f(6);
  f.add_track(1, 1, 4, 0.0);
  const TrackId group[] = {1};
  const auto frames = merge_tracks(group, f.hypotheses, f.recording);
  ASSERT_EQ(frames.size(), 4u);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    EXPECT_EQ(frames[i].k, static_cast<std::int64_t>(i + 1));
    ASSERT_EQ(frames[i].detections.size(), 1u);
    EXPECT_EQ(frames[i].detections[0].id, f.hypotheses.detections_of(1, frames[i].k)[0]);
  }
}

TEST(MergeTracks, DisjointTracksLeaveGap) {
  Fixture f(10);
  f.add_track(1, 0, 2, 0.0);
  f.add_track(2, 6, 8, 0.0);
  const TrackId group[] = {1, 2};
  const auto frames = merge_tracks(group, f.hypotheses, f.recording);
  ASSERT_EQ(frames.size(), 9u);
  for (std::int64_t k = 3; k <= 5; ++k) EXPECT_TRUE(frames[static_cast<std::size_t>(k)].detections.empty());
  EXPECT_EQ(frames.front().k, 0);
  EXPECT_EQ(frames.back().k, 8);
}

TEST(MergeTracks, OverlapUnitesDetections) {
  Fixture f(4);
  f.add_track(1, 0, 3, 0.0);
  f.add_track(2, 2, 2, 1.0);
  const TrackId group[] = {1, 2};
  const auto frames = merge_tracks(group, f.hypotheses, f.recording);
  EXPECT_EQ(frames[2].detections.size(), 2u);
  EXPECT_EQ(frames[1].detections.size(), 1u);
  EXPECT_THROW(merge_tracks(std::span<const TrackId>{}, f.hypotheses, f.recording), ValidationError);
}

TEST(Decision, Validation) {
  Fixture f(4);
  f.add_track(1, 0, 3, 0.0);
  f.add_track(2, 0, 3, 3.0);
  SupervisionDecision d;
  d.accepted = {1, 9999};
  auto errors = validation_errors(d, f.hypotheses);
  ASSERT_FALSE(errors.empty());
  EXPECT_NE(errors.front().find("9999"), std::string::npos);
  EXPECT_THROW(validate(d, f.hypotheses), ValidationError);

  SupervisionDecision twice;
  twice.merge_groups = {{1, 2}, {2}};
  EXPECT_FALSE(validation_errors(twice, f.hypotheses).empty());

  SupervisionDecision ok;
  ok.merge_groups = {{2, 1}};
  ok.classes[1] = ObjectClass::Car;
  EXPECT_TRUE(validation_errors(ok, f.hypotheses).empty());
  const auto objects = supervised_objects(ok);
  ASSERT_EQ(objects.size(), 1u);
  EXPECT_EQ(objects[0].track_ids, (std::vector<TrackId>{1, 2}));
  EXPECT_EQ(objects[0].object_class, ObjectClass::Car);
}

TEST(Finalize, EmptyDecision) {
  const Scenario s = generate_scenario(random_scenario(2, 3, 2.0));
  const HypothesisSet h = run_eot(s.recording, TrackerConfig::defaults());
  EXPECT_TRUE(finalize(SupervisionDecision{}, h, s.recording, FinalizerConfig{}).empty());
}

TEST(Finalize, UnknownTrackRejected) {
  const Scenario s = generate_scenario(random_scenario(2, 3, 2.0));
  const HypothesisSet h = run_eot(s.recording, TrackerConfig::defaults());
  SupervisionDecision d;
  d.accepted = {123456};
  EXPECT_THROW(finalize(d, h, s.recording, FinalizerConfig{}), ValidationError);
}

TEST(Finalize, PedestrianKeepsFixedSizeAndExtentAxis) {
  SynthConfig sc;
  sc.seed = 4;
  sc.duration = 5.0;
  ObjectScript o;
  o.id = 1;
  o.object_class = ObjectClass::Pedestrian;
  o.length = 0.6;
  o.width = 0.4;
  o.start = Vec2(8, 8);
  o.heading = -0.5;
  o.segments = {{5.0, 1.2, 0.0}};
  sc.objects = {o};
  const Scenario s = generate_scenario(sc);
  const HypothesisSet h = run_eot(s.recording, TrackerConfig::defaults());
  const SupervisionDecision d = oracle_decision(h, s.labels);
  ASSERT_FALSE(d.accepted.empty());
  const auto trajs = finalize(d, h, s.recording, FinalizerConfig{});
  ASSERT_EQ(trajs.size(), 1u);
  const ObjectTrajectory& t = trajs[0];
  EXPECT_EQ(t.object_class, ObjectClass::Pedestrian);
  ASSERT_TRUE(t.length && t.width);
  for (const TrajectoryState& st : t.states) {
    const EllipseAxes axes = ellipse_axes(st.X);
    EXPECT_NEAR(axes.length, *t.length, 1e-9);
    EXPECT_NEAR(axes.width, *t.width, 1e-9);
  }
}

TEST(Finalize, Idempotent) {
  const Scenario s = generate_scenario(random_scenario(5, 4, 5.0));
  const HypothesisSet h = run_eot(s.recording, TrackerConfig::defaults());
  const SupervisionDecision d = oracle_decision(h, s.labels);
  const auto a = finalize(d, h, s.recording, FinalizerConfig{});
  const auto b = finalize(d, h, s.recording, FinalizerConfig{});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].states.size(), b[i].states.size());
    EXPECT_EQ(a[i].length, b[i].length);
    for (std::size_t j = 0; j < a[i].states.size(); ++j) {
      EXPECT_EQ(a[i].states[j].x, b[i].states[j].x);
      EXPECT_EQ(a[i].states[j].X, b[i].states[j].X);
    }
  }
}

TEST(Finalize, SplitTurningCarBecomesOneTrajectory) {
  // Drop the car's detections for a stretch of the turn so the tracker loses
  // it and starts a second track, then merge both tracks.
  const SynthConfig sc = turning_car_scenario(3);
  Scenario s = generate_scenario(sc);
  const ObjectId car = sc.objects.front().id;
  for (RadarScan& scan : s.recording.scans) {
    if (scan.k < 40 || scan.k >= 50) continue;
    ScanLabels* labels = nullptr;
    for (ScanLabels& sl : s.labels.scans)
      if (sl.k == scan.k) labels = &sl;
    std::erase_if(scan.detections, [&](const Detection& d) {
      if (labels == nullptr) return false;
      auto it = labels->labels.find(d.id);
      const bool drop = it != labels->labels.end() && it->second == car;
      if (drop) labels->labels.erase(it);
      return drop;
    });
  }
  const HypothesisSet h = run_eot(s.recording, TrackerConfig::defaults());
  const SupervisionDecision d = oracle_decision(h, s.labels);
  ASSERT_EQ(d.merge_groups.size(), 1u);
  const auto& group = d.merge_groups.front();
  ASSERT_GE(group.size(), 2u);
  std::int64_t first = 1 << 30, last = -1;
  for (TrackId id : group) {
    const TrackRecord* r = h.find(id);
    first = std::min(first, r->birth_k());
    last = std::max(last, r->last_hit_k());
  }
  const auto trajs = finalize(d, h, s.recording, FinalizerConfig{});
  ASSERT_EQ(trajs.size(), 1u);
  const ObjectTrajectory& t = trajs[0];
  EXPECT_EQ(t.k_start, first);
  EXPECT_EQ(t.k_end, last);
  ASSERT_EQ(t.states.size(), static_cast<std::size_t>(last - first + 1));
  for (std::size_t i = 0; i < t.states.size(); ++i) EXPECT_EQ(t.states[i].k, first + static_cast<std::int64_t>(i));
  EXPECT_EQ(t.object_class, ObjectClass::Car);
}

}  // namespace
}  // namespace baas
