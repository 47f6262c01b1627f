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


#include "baas/report.hpp"
#include "baas/session.hpp"
#include "baas/synth.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace baas {
namespace {

DetectionLabels manual_as_predicted(const ManualLabelSet& labels) {
  DetectionLabels out;
  for (const ScanLabels& s : labels.scans)
    for (const auto& [det, obj] : s.labels)
      if (obj != kClutterObject) out[s.k][det] = obj;
  return out;
}

TEST(Report, PerfectEstimatesScorePerfectly) {
  const Scenario s = generate_scenario(random_scenario(2, 4, 3.0));
  const PipelineConfig cfg = PipelineConfig::defaults();
  const LabelTrackingResult gt = label_data_tracking(s.recording, s.labels, cfg.tracker);
  const EstimateSeries truth = series_from_tracks(gt.hypotheses, s.recording.scans.size());
  const StepRow row = evaluate_step(5, "perfect", truth, manual_as_predicted(s.labels), truth,
                                    s.recording, s.labels, cfg.match_gate);
  EXPECT_DOUBLE_EQ(*row.get("mota"), 1.0);
  EXPECT_DOUBLE_EQ(*row.get("motp"), 0.0);
  EXPECT_DOUBLE_EQ(*row.get("precision"), 1.0);
  EXPECT_DOUBLE_EQ(*row.get("recall"), 1.0);
  EXPECT_DOUBLE_EQ(*row.get("f1"), 1.0);
  EXPECT_DOUBLE_EQ(*row.get("tracks_fp_per_scan"), 0.0);
  EXPECT_DOUBLE_EQ(*row.get("tracks_mm"), 0.0);
}

TEST(Report, SupervisionRemovesFalseTracks) {
  const PipelineConfig cfg = PipelineConfig::defaults();
  double fp1 = 0.0;
  double fp3 = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario s = generate_scenario(random_scenario(seed, 5, 5.0));
    const HypothesisSet h = run_eot(s.recording, cfg.tracker);
    const SupervisionDecision d = oracle_decision(h, s.labels);
    StepOutputs out;
    out.hypotheses = &h;
    out.decision = &d;
    const Report r = evaluate_steps(s.recording, s.labels, out, cfg);
    ASSERT_EQ(r.rows.size(), 5u);
    fp1 += *r.rows[0].get("tracks_fp_per_scan");
    fp3 += *r.rows[2].get("tracks_fp_per_scan");
    EXPECT_FALSE(r.rows[3].available());
    EXPECT_FALSE(r.rows[4].available());
  }
  EXPECT_GT(fp1, fp3);
}

TEST(Report, RoundTrip) {
  const Scenario s = generate_scenario(random_scenario(3, 3, 2.0, 4.0));
  const PipelineConfig cfg = PipelineConfig::defaults();
  const HypothesisSet h = run_eot(s.recording, cfg.tracker);
  StepOutputs out;
  out.hypotheses = &h;
  const Report r = evaluate_steps(s.recording, s.labels, out, cfg);
  std::ostringstream os;
  write_report(r, os);
  std::istringstream is(os.str());
  const Report back = read_report(is);
  EXPECT_EQ(back, r);
  EXPECT_FALSE(format_report(r).empty());
}

TEST(Report, UnavailableRow) {
  const StepRow row = unavailable_row(4, "x");
  EXPECT_FALSE(row.available());
  EXPECT_EQ(row.values.size(), report_metrics().size());
  EXPECT_FALSE(row.get("mota").has_value());
  EXPECT_NE(format_report(Report{{row}, {}}).find("n/a"), std::string::npos);
}

}  // namespace
}  // namespace baas
