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


#include "baas/synth.hpp"
#include "baas/tracker.hpp"

#include "random_cases.hpp"

#include <gtest/gtest.h>

#include <set>

namespace baas {
namespace {

TEST(Invariants, FilterKeepsCovariancesAndWeights) {
  const auto r = testing::filter_invariants(1000, 101);
  EXPECT_EQ(r.cases, 1000);
  EXPECT_TRUE(r.ok()) << r.failures << " failures, first: " << r.first_failure;
}

TEST(Invariants, ExtentAverageIsConvex) {
  const auto r = testing::convexity_invariant(5000, 102);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

TEST(Invariants, AnnotationMonotoneInBorder) {
  const auto r = testing::annotation_monotonicity(1000, 103);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

// Sweep every stored snapshot of full tracker runs.
TEST(Invariants, TrackerRunsStayNumericallySound) {
  const TrackerConfig cfg = TrackerConfig::defaults();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scenario s = generate_scenario(random_scenario(seed, 6, 5.0));
    const HypothesisSet h = run_eot(s.recording, cfg);
    for (const TrackRecord& rec : h.tracks) {
      EXPECT_FALSE(rec.failed) << rec.failure;
      for (const TrackSnapshot& snap : rec.history) {
        TrackHypothesis t;
        t.state = snap.state;
        t.extent = snap.extent;
        const std::string why = testing::track_problems(t, cfg);
        EXPECT_TRUE(why.empty()) << "seed " << seed << " track " << rec.track_id << " k " << snap.k << ": " << why;
      }
    }
    for (const ScanAssociation& a : h.associations) {
      std::multiset<DetId> seen;
      for (const auto& [id, dets] : a.assigned) seen.insert(dets.begin(), dets.end());
      for (const auto& c : a.leftover) seen.insert(c.begin(), c.end());
      for (DetId d : seen) EXPECT_EQ(seen.count(d), 1u) << "seed " << seed << " k " << a.k;
      for (DetId d : seen) EXPECT_NE(s.recording.scan(a.k).find(d), nullptr);
    }
  }
}

}  // namespace
}  // namespace baas
