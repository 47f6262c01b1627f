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
#include "baas/scenario_io.hpp"
#include "baas/synth.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace baas {
namespace {

std::string recording_text(const Recording& rec) {
  std::ostringstream os;
  write_recording(rec, os);
  return os.str();
}

void expect_same(const Recording& a, const Recording& b) {
  ASSERT_EQ(a.scans.size(), b.scans.size());
  EXPECT_EQ(a.meta.id, b.meta.id);
  for (std::size_t k = 0; k < a.scans.size(); ++k) {
    const RadarScan& x = a.scans[k];
    const RadarScan& y = b.scans[k];
    EXPECT_EQ(x.k, y.k);
    EXPECT_EQ(x.t, y.t);
    EXPECT_EQ(x.ego.x, y.ego.x);
    EXPECT_EQ(x.ego.yaw, y.ego.yaw);
    ASSERT_EQ(x.detections.size(), y.detections.size());
    for (std::size_t j = 0; j < x.detections.size(); ++j) {
      EXPECT_EQ(x.detections[j].id, y.detections[j].id);
      EXPECT_EQ(x.detections[j].x, y.detections[j].x);
      EXPECT_EQ(x.detections[j].y, y.detections[j].y);
      EXPECT_EQ(x.detections[j].vr, y.detections[j].vr);
      EXPECT_EQ(x.detections[j].noise, y.detections[j].noise);
    }
  }
}

TEST(Recording, RoundTripIsExact) {
  const Scenario s = generate_scenario(random_scenario(9, 5, 5.0));
  testing::TempDir dir("rec");
  save_recording(s.recording, dir / "rec.jsonl");
  const Recording back = load_recording(dir / "rec.jsonl");
  expect_same(s.recording, back);
  EXPECT_EQ(recording_text(s.recording), recording_text(back));
}

TEST(Recording, EmptyScans) {
  std::istringstream is(
      "{\"k\":0,\"t\":0.0,\"ego\":{\"x\":0,\"y\":0,\"yaw\":0,\"v\":0,\"yaw_rate\":0},\"detections\":[]}\n"
      "{\"k\":1,\"t\":0.1,\"ego\":{\"x\":0,\"y\":0,\"yaw\":0,\"v\":0,\"yaw_rate\":0},\"detections\":[]}\n");
  const Recording rec = read_recording(is);
  ASSERT_EQ(rec.scans.size(), 2u);
  EXPECT_EQ(rec.detection_count(), 0u);
}

TEST(Recording, NonMonotoneTimestampsRejected) {
  std::istringstream is(
      "{\"k\":0,\"t\":0.0,\"ego\":{\"x\":0,\"y\":0,\"yaw\":0,\"v\":0,\"yaw_rate\":0},\"detections\":[]}\n"
      "{\"k\":1,\"t\":0.0,\"ego\":{\"x\":0,\"y\":0,\"yaw\":0,\"v\":0,\"yaw_rate\":0},\"detections\":[]}\n");
  EXPECT_THROW(read_recording(is), ValidationError);
}

TEST(Recording, SchemaViolationReportsLine) {
  std::istringstream is(
      "{\"k\":0,\"t\":0.0,\"ego\":{\"x\":0,\"y\":0,\"yaw\":0,\"v\":0,\"yaw_rate\":0},\"detections\":[]}\n"
      "{\"k\":1,\"t\":0.1,\"ego\":{\"x\":0,\"y\":0,\"yaw\":0,\"v\":0,\"yaw_rate\":0},\"detections\":[{\"id\":0}]}\n");
  try {
    read_recording(is);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream garbage("{\"k\":0,\n");
  EXPECT_THROW(read_recording(garbage), ParseError);
}

TEST(Recording, DuplicateDetectionIdRejected) {
  Recording rec;
  RadarScan s;
  s.detections = {testing::make_detection(1, 0, 0, 0), testing::make_detection(1, 1, 0, 0)};
  rec.scans = {s};
  EXPECT_THROW(validate(rec), ValidationError);
}

TEST(Recording, AsymmetricNoiseRejected) {
  Recording rec;
  RadarScan s;
  Detection d = testing::make_detection(1, 0, 0, 0);
  d.noise(0, 1) = 0.5;
  s.detections = {d};
  rec.scans = {s};
  EXPECT_THROW(validate(rec), Error);
}

TEST(Labels, RoundTripAndCrossValidation) {
  const Scenario s = generate_scenario(random_scenario(4, 3, 5.0));
  testing::TempDir dir("labels");
  save_labels(s.labels, dir / "labels.jsonl");
  const ManualLabelSet back = load_labels(dir / "labels.jsonl");
  ASSERT_EQ(back.scans.size(), s.labels.scans.size());
  for (std::size_t i = 0; i < back.scans.size(); ++i) EXPECT_EQ(back.scans[i].labels, s.labels.scans[i].labels);
  EXPECT_EQ(back.classes, s.labels.classes);
  EXPECT_TRUE(cross_validate(back, s.recording).empty());

  ManualLabelSet extra = back;
  extra.scans[3].labels[99999] = extra.classes.begin()->first;
  const auto warnings = cross_validate(extra, s.recording);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("99999"), std::string::npos);
}

TEST(Labels, DuplicateDetectionRejected) {
  std::istringstream is("{\"k\":0,\"labels\":[{\"id\":3,\"obj\":1},{\"id\":3,\"obj\":2}],\"classes\":{\"1\":\"Car\",\"2\":\"Car\"}}\n");
  EXPECT_THROW(read_labels(is), ValidationError);
}

TEST(Trajectories, RoundTrip) {
  std::mt19937_64 rng(91);
  std::vector<ObjectTrajectory> trajs(2);
  for (int i = 0; i < 2; ++i) {
    ObjectTrajectory& t = trajs[static_cast<std::size_t>(i)];
    t.object_id = 10 + i;
    t.object_class = i == 0 ? ObjectClass::Car : ObjectClass::PedestrianGroup;
    t.k_start = 3;
    t.k_end = 5;
    t.source_track_ids = {4, 9};
    if (i == 0) {
      t.length = 4.4;
      t.width = 1.9;
    }
    for (int k = 3; k <= 5; ++k) {
      TrajectoryState s;
      s.k = k;
      s.x = Vec4::Random();
      s.P = testing::random_spd<4>(rng);
      s.alpha = 0.1 * k;
      s.X = testing::random_spd<2>(rng);
      s.n_assoc = k;
      t.states.push_back(s);
    }
  }
  std::ostringstream os;
  write_trajectories(trajs, os);
  std::istringstream is(os.str());
  const auto back = read_trajectories(is);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].object_id, trajs[i].object_id);
    EXPECT_EQ(back[i].object_class, trajs[i].object_class);
    EXPECT_EQ(back[i].length, trajs[i].length);
    EXPECT_EQ(back[i].source_track_ids, trajs[i].source_track_ids);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(back[i].states[j].x, trajs[i].states[j].x);
      EXPECT_EQ(back[i].states[j].P, trajs[i].states[j].P);
      EXPECT_EQ(back[i].states[j].X, trajs[i].states[j].X);
      EXPECT_EQ(back[i].states[j].alpha, trajs[i].states[j].alpha);
    }
  }
  std::ostringstream again;
  write_trajectories(back, again);
  EXPECT_EQ(again.str(), os.str());
}

TEST(Annotations, RoundTripAndRhoRange) {
  const std::vector<AnnotationRecord> recs = {{0, 1, 2, 1.0, Region::Core, 3.5},
                                              {0, 2, 2, 0.25, Region::Border, 9.1}};
  std::ostringstream os;
  write_annotations(recs, os);
  std::istringstream is(os.str());
  const auto back = read_annotations(is);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].rho, 0.25);
  EXPECT_EQ(back[1].region, Region::Border);
  EXPECT_EQ(back[0].d2, 3.5);

  std::istringstream bad("{\"k\":0,\"det_id\":1,\"object_id\":2,\"rho\":1.5,\"region\":\"border\"}\n");
  EXPECT_THROW(read_annotations(bad), ValidationError);
}

TEST(Hypotheses, RoundTrip) {
  const Scenario s = generate_scenario(random_scenario(6, 4, 5.0));
  const HypothesisSet h = run_eot(s.recording, TrackerConfig::defaults());
  std::ostringstream hist, assoc;
  write_history(h, hist);
  write_associations(h, assoc);
  std::istringstream hi(hist.str()), ai(assoc.str());
  const HypothesisSet back = read_hypotheses(hi, ai);
  std::ostringstream hist2, assoc2;
  write_history(back, hist2);
  write_associations(back, assoc2);
  EXPECT_EQ(hist.str(), hist2.str());
  EXPECT_EQ(assoc.str(), assoc2.str());
}

TEST(Decision, RoundTrip) {
  SupervisionDecision d;
  d.accepted = {1, 4, 7};
  d.merge_groups = {{4, 7}};
  d.classes = {{1, ObjectClass::Pedestrian}, {4, ObjectClass::Truck}};
  d.size_overrides[4] = {6.0, 12.0, 2.0, 2.6};
  EXPECT_EQ(decode_decision(encode(d)), d);
}

}  // namespace
}  // namespace baas
