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
#include "baas/session.hpp"
#include "baas/synth.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <map>

namespace baas {
namespace {

namespace fs = std::filesystem;

Session make_session(const fs::path& dir, std::uint64_t seed = 7) {
  const Scenario s = generate_scenario(random_scenario(seed, 4, 3.0, 6.0));
  return Session::create(dir, s.recording, s.labels, PipelineConfig::defaults());
}

std::map<std::string, std::string> artifacts(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name == session_files::kAudit || name == session_files::kManifest) continue;
    out[name] = read_file(e.path());
  }
  return out;
}

TEST(Session, StageNames) {
  for (Stage s : all_stages()) EXPECT_EQ(stage_from_string(to_string(s)), s);
  EXPECT_THROW(stage_from_string("bogus"), ValidationError);
}

TEST(Session, FinalizeBeforeSupervisionFails) {
  testing::TempDir dir("sess");
  Session s = make_session(dir.path());
  EXPECT_THROW(s.run_stage(Stage::Finalize), PreconditionError);
  s.run_stage(Stage::Track);
  try {
    s.run_stage(Stage::Finalize);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("supervision"), std::string::npos);
  }
  EXPECT_THROW(s.run_stage(Stage::Annotate), PreconditionError);
  EXPECT_THROW(s.run_stage(Stage::Supervise), ValidationError);
}

TEST(Session, RetrackIsByteIdentical) {
  testing::TempDir dir("sess");
  Session s = make_session(dir.path());
  s.run_stage(Stage::Track);
  const auto first = artifacts(dir.path());
  s.run_stage(Stage::Track);
  EXPECT_EQ(artifacts(dir.path()), first);
}

TEST(Session, FullPipelineWritesEveryArtifact) {
  testing::TempDir dir("sess");
  Session s = make_session(dir.path());
  s.run_stage(Stage::Track);
  s.apply_supervision(oracle_decision(s.hypotheses(), s.labels()));
  s.run_stage(Stage::Finalize);
  s.run_stage(Stage::Annotate);
  s.run_stage(Stage::Evaluate);
  for (Stage st : all_stages()) {
    EXPECT_TRUE(s.complete(st)) << to_string(st);
    for (const auto& f : stage_artifacts(st)) EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_FALSE(s.trajectories().empty());
  EXPECT_FALSE(s.annotations().empty());
  EXPECT_EQ(s.report().rows.size(), 5u);

  // Reopening yields the same state.
  const Session again = Session::open(dir.path());
  for (Stage st : all_stages()) EXPECT_TRUE(again.complete(st));
  EXPECT_EQ(again.report(), s.report());
  EXPECT_EQ(again.annotation_border(), s.annotation_border());
}

TEST(Session, InvalidDecisionRejected) {
  testing::TempDir dir("sess");
  Session s = make_session(dir.path());
  s.run_stage(Stage::Track);
  SupervisionDecision d;
  d.accepted = {9999};
  EXPECT_THROW(s.apply_supervision(d), ValidationError);
  EXPECT_FALSE(s.complete(Stage::Supervise));
  EXPECT_TRUE(s.audit().empty());
}

TEST(Session, SecondDecisionInvalidatesDownstream) {
  testing::TempDir dir("sess");
  Session s = make_session(dir.path());
  s.run_stage(Stage::Track);
  const SupervisionDecision d1 = oracle_decision(s.hypotheses(), s.labels());
  ASSERT_GE(d1.accepted.size(), 2u);
  s.apply_supervision(d1);
  s.run_stage(Stage::Finalize);
  s.run_stage(Stage::Annotate);
  EXPECT_TRUE(fs::exists(dir / session_files::kTrajectories));

  SupervisionDecision d2;
  d2.accepted = {d1.accepted.front()};
  d2.classes[d1.accepted.front()] = d1.classes.at(d1.accepted.front());
  s.apply_supervision(d2, "api");
  EXPECT_FALSE(s.complete(Stage::Finalize));
  EXPECT_FALSE(s.complete(Stage::Annotate));
  EXPECT_FALSE(fs::exists(dir / session_files::kTrajectories));
  EXPECT_FALSE(fs::exists(dir / session_files::kAnnotations));
  EXPECT_EQ(*s.decision(), d2);

  const auto audit = s.audit();
  ASSERT_EQ(audit.size(), 2u);
  EXPECT_EQ(audit[0].seq, 0);
  EXPECT_EQ(audit[1].seq, 1);
  EXPECT_EQ(audit[1].source, "api");
  EXPECT_EQ(*audit[0].decision, d1);
  EXPECT_EQ(replay_audit(audit, s.hypotheses()), d2);
  EXPECT_EQ(replay_audit(std::span(audit).first(1), s.hypotheses()), d1);
}

TEST(Session, ReloadAfterInterruptedStage) {
  testing::TempDir dir("sess");
  {
    Session s = make_session(dir.path());
    s.run_stage(Stage::Track);
    s.apply_supervision(oracle_decision(s.hypotheses(), s.labels()));
    // A crash mid-finalize leaves at most a stray file; the manifest still
    // says finalize has not completed.
    write_file_atomic(dir / session_files::kTrajectories, "{\"broken\":");
  }
  Session s = Session::open(dir.path());
  EXPECT_TRUE(s.complete(Stage::Supervise));
  EXPECT_FALSE(s.complete(Stage::Finalize));
  s.run_stage(Stage::Finalize);
  EXPECT_TRUE(s.complete(Stage::Finalize));
  EXPECT_FALSE(s.trajectories().empty());
}

TEST(Session, ConfigFixedAfterTracking) {
  testing::TempDir dir("sess");
  Session s = make_session(dir.path());
  PipelineConfig cfg = PipelineConfig::defaults();
  cfg.match_gate = 3.0;
  s.set_config(cfg);
  EXPECT_EQ(Session::open(dir.path()).config().match_gate, 3.0);
  s.run_stage(Stage::Track);
  EXPECT_THROW(s.set_config(PipelineConfig::defaults()), PreconditionError);
}

TEST(Session, CreateRefusesExisting) {
  testing::TempDir dir("sess");
  make_session(dir.path());
  EXPECT_THROW(make_session(dir.path()), ValidationError);
  EXPECT_THROW(Session::open(dir / "nothing"), NotFoundError);
}

TEST(Session, ScanAndTrackViews) {
  testing::TempDir dir("sess");
  Session s = make_session(dir.path());
  s.run_stage(Stage::Track);
  const HypothesisSet h = s.hypotheses();
  const Json v = scan_view(s, 10, &h, nullptr, nullptr);
  EXPECT_EQ(v.at("k").get<std::int64_t>(), 10);
  EXPECT_TRUE(v.contains("hypotheses"));
  EXPECT_FALSE(v.contains("trajectories"));
  const TrackId id = h.tracks.front().track_id;
  EXPECT_EQ(track_view(h, id).at("track_id").get<TrackId>(), id);
  EXPECT_THROW(track_view(h, 123456), NotFoundError);
}

}  // namespace
}  // namespace baas
