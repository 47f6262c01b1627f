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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include "baas/annotator.hpp"
#include "baas/evaluator.hpp"
#include "baas/finalizer.hpp"
#include "baas/report.hpp"
#include "baas/session.hpp"
#include "baas/smoother.hpp"
#include "baas/synth.hpp"

#include "oracles.hpp"
#include "random_cases.hpp"
#include "test_util.hpp"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace baas {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome f1_consistency() {
  ConfusionCounts c;
  c.tp = 92 * 81;
  c.fp = 92 * 19;
  c.fn = 81 * 8;
  const PrecisionRecall pr = precision_recall_f1(c);
  const bool ok = std::abs(pr.precision - 0.81) < 1e-12 && std::abs(pr.recall - 0.92) < 1e-12 &&
                  pr.f1 >= 0.86 && pr.f1 <= 0.87;
  return {ok, "P=" + fmt("%.4f", pr.precision) + " R=" + fmt("%.4f", pr.recall) + " F1=" + fmt("%.4f", pr.f1) +
                  " (arithmetic " + fmt("%.4f", pr.f1_arithmetic) + ")"};
}

// ---------------------------------------------------------------------------

ScanMatch scan(int tp, int fp, int fn, int mm) {
  ScanMatch s;
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  s.mm = mm;
  for (int i = 0; i < tp; ++i) s.pairs.push_back({i, i, Vec4::Zero()});
  return s;
}

ScanMatch one_pair(const Vec4& error) {
  ScanMatch s;
  s.tp = 1;
  s.pairs.push_back({0, 0, error});
  return s;
}

ConfusionCounts brute_confusion(const Recording& rec, const DetectionLabels& pred, const ManualLabelSet& truth) {
  ConfusionCounts c;
  for (const RadarScan& s : rec.scans) {
    for (const Detection& d : s.detections) {
      std::optional<ObjectId> p, t;
      if (auto it = pred.find(s.k); it != pred.end()) {
        if (auto jt = it->second.find(d.id); jt != it->second.end() && jt->second != kClutterObject) p = jt->second;
      }
      if (const ScanLabels* sl = truth.find(s.k)) {
        if (auto jt = sl->labels.find(d.id); jt != sl->labels.end() && jt->second != kClutterObject) t = jt->second;
      }
      if (p && t) (*p == *t ? c.tp : c.fp) += 1;
      else if (p) c.fp += 1;
      else if (t) c.fn += 1;
      else c.tn += 1;
    }
  }
  return c;
}

Outcome metric_oracles() {
  std::vector<std::string> bad;
  auto check = [&](const std::string& name, double got, double want) {
    if (!(std::abs(got - want) <= 1e-12)) bad.push_back(name + "=" + fmt("%.15g", got));
  };
  check("mota_perfect", mota(MatchEventLog{{scan(10, 0, 0, 0)}}), 1.0);
  check("mota_fn_fp", mota(MatchEventLog{{scan(5, 0, 1, 0), scan(5, 1, 0, 0)}}), 0.8);
  check("mota_negative", mota(MatchEventLog{{scan(10, 5, 5, 5)}}), -0.5);

  check("motp_zero", motp(MatchEventLog{{one_pair(Vec4::Zero())}}), 0.0);
  check("motp_two", motp(MatchEventLog{{one_pair(Vec4(1, 0, 0, 0)), one_pair(Vec4(0, 0, 0, 3))}}), 2.0);
  check("motp_scaled", motp(MatchEventLog{{one_pair(Vec4(2, 0, 0, 0)), one_pair(Vec4(0, 0, 0, 6))}}), 4.0);

  // Confusion: identical sets, one mismatch, and random instances vs brute force.
  Recording rec;
  ManualLabelSet truth;
  RadarScan s0;
  for (int i = 0; i < 4; ++i) s0.detections.push_back(testing::make_detection(i, i, 0, 0));
  rec.scans = {s0};
  truth.scans = {ScanLabels{0, {{0, 7}, {1, 7}, {2, 8}, {3, kClutterObject}}}};
  DetectionLabels same{{0, {{0, 7}, {1, 7}, {2, 8}}}};
  const ConfusionCounts c1 = confusion(rec, same, truth);
  check("confusion_same_fp", c1.fp, 0);
  check("confusion_same_fn", c1.fn, 0);
  check("confusion_same_tp", c1.tp, 3);
  check("confusion_same_tn", c1.tn, 1);
  DetectionLabels swapped = same;
  swapped[0][2] = 7;
  const ConfusionCounts c2 = confusion(rec, swapped, truth);
  check("confusion_mismatch_fp", c2.fp, 1);
  check("confusion_mismatch_tp", c2.tp, 2);

  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> obj(-1, 4), coin(0, 2), dets(0, 20);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Recording r;
    ManualLabelSet t;
    DetectionLabels p;
    for (int k = 0; k < 5; ++k) {
      RadarScan s;
      s.k = k;
      ScanLabels sl{k, {}};
      const int n = dets(rng);
      for (int i = 0; i < n; ++i) {
        s.detections.push_back(testing::make_detection(i, i, k, 0));
        if (coin(rng) != 0) sl.labels[i] = obj(rng);
        if (coin(rng) != 0) p[k][i] = obj(rng);
      }
      r.scans.push_back(s);
      t.scans.push_back(sl);
    }
    if (!(confusion(r, p, t) == brute_confusion(r, p, t))) ++mismatches;
  }
  if (mismatches > 0) bad.push_back("confusion_random=" + std::to_string(mismatches) + " mismatches");

  std::string detail = "mota 3/3, motp 3/3, confusion 3/3 (500 random instances)";
  if (!bad.empty()) {
    detail = "failed:";
    for (const auto& b : bad) detail += " " + b;
  }
  return {bad.empty(), detail};
}

// ---------------------------------------------------------------------------

struct Pipeline {
  Scenario scenario;
  HypothesisSet hypotheses;
  SupervisionDecision decision;
  std::vector<ObjectTrajectory> trajectories;
};

Pipeline run_pipeline(const SynthConfig& sc, const PipelineConfig& cfg, FinalizeOptions options = {}) {
  Pipeline p;
  p.scenario = generate_scenario(sc);
  p.hypotheses = run_eot(p.scenario.recording, cfg.tracker);
  p.decision = oracle_decision(p.hypotheses, p.scenario.labels);
  p.trajectories = finalize(p.decision, p.hypotheses, p.scenario.recording, cfg.finalizer(options));
  return p;
}

Outcome annotation_oracle() {
  const PipelineConfig cfg = PipelineConfig::defaults();
  AnnotatorConfig acfg = cfg.annotator;
  acfg.border = BorderFn::linear(1.0, 0.2, 0.1, 0.02);
  const double core = oracle::chi2_quantile(3, acfg.alpha);

  std::mt19937_64 rng(77);
  int scans = 0, records = 0, mismatched = 0;
  for (std::uint64_t seed = 1; scans < 100; ++seed) {
    const Pipeline p = run_pipeline(random_scenario(seed, 6, 5.0), cfg);
    const auto& rec = p.scenario.recording;
    std::uniform_int_distribution<std::size_t> pick(0, rec.scans.size() - 1);
    for (int i = 0; i < 10 && scans < 100; ++i, ++scans) {
      const RadarScan& s = rec.scans[pick(rng)];
      std::set<std::tuple<DetId, ObjectId, bool>> expected, actual;
      for (const ObjectTrajectory& t : p.trajectories) {
        const TrajectoryState* st = t.at(s.k);
        if (st == nullptr) continue;
        const Vec2 pos = st->x.head<2>();
        const double speed = std::hypot(st->x(2), st->x(3));
        const double area = 3.14159265358979323846 *
                            std::sqrt(std::max(0.0, st->X(0, 0) * st->X(1, 1) - st->X(0, 1) * st->X(1, 0)));
        const double range = (pos - oracle::nearest_sensor(s.ego, pos)).norm();
        const double eta = std::max(0.0, 1.0 + 0.2 * speed + 0.1 * area + 0.02 * range);
        for (const Detection& d : s.detections) {
          const auto d2 = oracle::gate_d2(d, st->x, st->P, st->X, acfg.extent_scale, s.ego);
          if (!d2) continue;
          if (*d2 <= core) expected.insert({d.id, t.object_id, true});
          else if (*d2 <= core + eta) expected.insert({d.id, t.object_id, false});
        }
      }
      for (const auto& r : annotate_scan(p.trajectories, s, acfg)) {
        actual.insert({r.det_id, r.object_id, r.region == Region::Core});
      }
      records += static_cast<int>(expected.size());
      if (actual != expected) ++mismatched;
    }
  }
  return {mismatched == 0, std::to_string(scans) + " scans, " + std::to_string(records) +
                               " oracle records, " + std::to_string(mismatched) + " scans differ"};
}

// ---------------------------------------------------------------------------

bool covered(const TrajectoryState& truth, const HypothesisSet& h) {
  for (const TrackRecord& rec : h.tracks) {
    const TrackSnapshot* s = rec.at(truth.k);
    if (s == nullptr || s->status != TrackStatus::Verified) continue;
    const Vec2 d = s->state.mean4().head<2>() - truth.x.head<2>();
    if (d.norm() <= 2.0) return true;
    if (d.dot(truth.X.ldlt().solve(d)) <= 1.0) return true;
  }
  return false;
}

// Longest run of consecutive scans with at least one detection of `id`.
int longest_run(const Scenario& s, ObjectId id) {
  int best = 0, run = 0;
  for (const ScanLabels& sl : s.labels.scans) {
    bool hit = false;
    for (const auto& [det, obj] : sl.labels) hit = hit || obj == id;
    run = hit ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

Outcome tracking_coverage() {
  const PipelineConfig cfg = PipelineConfig::defaults();
  testing::TempDir root("acceptance_cov");
  int objects = 0, eligible = 0, missed = 0;
  double worst_final = 1e9;
  std::uint64_t worst_seed = 0;
  long tp3 = 0, err3 = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int count = 3 + static_cast<int>((seed - 1) % 6);
    const Scenario sc = generate_scenario(random_scenario(seed, count, 5.0));
    objects += count;

    Session session = Session::create(root / std::to_string(seed), sc.recording, sc.labels, cfg);
    session.run_stage(Stage::Track);
    const HypothesisSet h = session.hypotheses();
    for (const ObjectTrajectory& truth : sc.truth) {
      if (longest_run(sc, truth.object_id) < 10) continue;
      ++eligible;
      bool hit = false;
      for (const TrajectoryState& st : truth.states) hit = hit || covered(st, h);
      if (!hit) ++missed;
    }

    session.apply_supervision(oracle_decision(h, sc.labels));
    session.run_stage(Stage::Finalize);
    session.run_stage(Stage::Annotate);
    session.run_stage(Stage::Evaluate);
    const auto final_mota = session.report().rows.at(4).get("mota");
    const double m = final_mota.value_or(-1e9);
    if (m < worst_final) {
      worst_final = m;
      worst_seed = seed;
    }

    const std::size_t n = sc.recording.scans.size();
    const auto gt = label_data_tracking(sc.recording, sc.labels, cfg.tracker);
    const auto log = match_tracks(series_from_decision(*session.decision(), h, n),
                                  series_from_tracks(gt.hypotheses, n, false), cfg.match_gate);
    tp3 += log.total_tp();
    err3 += log.total_fp() + log.total_fn() + log.total_mm();
  }
  const double pooled3 = tp3 > 0 ? 1.0 - static_cast<double>(err3) / static_cast<double>(tp3) : -1e9;
  const bool ok = missed == 0 && worst_final >= 0.95 && pooled3 >= 0.95;
  return {ok, std::to_string(eligible) + "/" + std::to_string(objects) + " objects eligible, " +
                  std::to_string(missed) + " uncovered; final MOTA min " + fmt("%.4f", worst_final) +
                  " (seed " + std::to_string(worst_seed) + "); supervised MOTA pooled " + fmt("%.4f", pooled3)};
}

// ---------------------------------------------------------------------------

Outcome smoother_gain() {
  const TrackerConfig cfg = TrackerConfig::defaults();
  int better = 0, runs = 0;
  double fsum = 0.0, ssum = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed, ++runs) {
    const Scenario s = generate_scenario(turning_car_scenario(seed));
    const ObjectTrajectory& truth = s.truth.front();
    const SmoothingResult r = refilter_and_smooth(testing::object_frames(s, truth.object_id), cfg);
    double fe = 0.0, se = 0.0;
    int n = 0;
    for (const SmoothedStep& step : r.steps) {
      const TrajectoryState* t = truth.at(step.k);
      if (t == nullptr) continue;
      fe += (step.filtered.mean4().head<2>() - t->x.head<2>()).squaredNorm();
      se += (step.smoothed.mean4().head<2>() - t->x.head<2>()).squaredNorm();
      ++n;
    }
    const double f = std::sqrt(fe / std::max(n, 1)), sm = std::sqrt(se / std::max(n, 1));
    fsum += f;
    ssum += sm;
    if (n > 0 && sm <= f) ++better;
  }
  return {better >= 95, std::to_string(better) + "/" + std::to_string(runs) + " runs improved; mean RMSE filtered " +
                            fmt("%.3f", fsum / runs) + " m, smoothed " + fmt("%.3f", ssum / runs) + " m"};
}

// ---------------------------------------------------------------------------

struct StepScore {
  double tp_per_scan = 0.0;
  double f1 = 0.0;
};

StepScore score(const Pipeline& p, const std::vector<ObjectTrajectory>& trajs, const PipelineConfig& cfg,
                const EstimateSeries& truth) {
  const auto& rec = p.scenario.recording;
  const AnnotationSet ann = annotate_recording(trajs, rec, cfg.annotator);
  const StepRow row = evaluate_step(0, "", series_from_trajectories(trajs, rec.scans.size()), binary_labels(ann),
                                    truth, rec, p.scenario.labels, cfg.match_gate);
  return {*row.get("det_tp_per_scan"), *row.get("f1")};
}

Outcome step_trend() {
  const PipelineConfig cfg = PipelineConfig::defaults();
  double raw_tp = 0.0, aligned_tp = 0.0, worst_drop = -1e9;
  const int seeds = 10;
  int gained = 0;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const Pipeline p = run_pipeline(turning_car_scenario(seed), cfg, {false, false, false});
    const auto& rec = p.scenario.recording;
    const auto gt = label_data_tracking(rec, p.scenario.labels, cfg.tracker);
    const EstimateSeries truth = series_from_tracks(gt.hypotheses, rec.scans.size(), false);
    const auto refined = finalize(p.decision, p.hypotheses, rec, cfg.finalizer({true, true, false}));
    const auto clamped = finalize(p.decision, p.hypotheses, rec, cfg.finalizer({true, true, true}));
    const StepScore raw = score(p, p.trajectories, cfg, truth);
    const StepScore s4 = score(p, refined, cfg, truth);
    const StepScore s5 = score(p, clamped, cfg, truth);
    if (s4.tp_per_scan > raw.tp_per_scan) ++gained;
    raw_tp += raw.tp_per_scan;
    aligned_tp += s4.tp_per_scan;
    worst_drop = std::max(worst_drop, s4.f1 - s5.f1);
  }
  raw_tp /= seeds;
  aligned_tp /= seeds;
  const bool ok = gained == seeds && worst_drop <= 0.02;
  return {ok, "TP/scan raw " + fmt("%.3f", raw_tp) + " -> aligned " + fmt("%.3f", aligned_tp) + ", higher on " +
                  std::to_string(gained) + "/" + std::to_string(seeds) + " seeds" +
                  "; largest F1 drop from clamping " + fmt("%.4f", worst_drop)};
}

// ---------------------------------------------------------------------------

Outcome numerical_invariants() {
  const auto spd = testing::filter_invariants(1000, 11);
  const auto convex = testing::convexity_invariant(1000, 12);
  const auto mono = testing::annotation_monotonicity(1000, 13);
  std::string detail = "filter SPD+weights " + std::to_string(spd.cases) + ", extent convexity " +
                       std::to_string(convex.cases) + ", border monotonicity " + std::to_string(mono.cases) +
                       " cases";
  for (const auto* r : {&spd, &convex, &mono}) {
    if (!r->ok()) detail += "; " + std::to_string(r->failures) + " failures, first " + r->first_failure;
  }
  return {spd.ok() && convex.ok() && mono.ok(), detail};
}

// ---------------------------------------------------------------------------

std::map<std::string, std::string> artifacts(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name == session_files::kAudit) continue;
    out[name] = read_file(e.path());
  }
  return out;
}

void run_all(Session& s) {
  s.run_stage(Stage::Track);
  if (!s.complete(Stage::Supervise)) s.apply_supervision(oracle_decision(s.hypotheses(), s.labels()));
  s.run_stage(Stage::Finalize);
  s.run_stage(Stage::Annotate);
  s.run_stage(Stage::Evaluate);
}

// Checks that every complete stage's artifacts load.
std::string check_loadable(const Session& s) {
  try {
    for (Stage st : all_stages()) {
      if (!s.complete(st)) continue;
      for (Stage prior : all_stages()) {
        if (prior == st) break;
        if (prior != Stage::Evaluate && !s.complete(prior)) return "stage complete without its prerequisite";
      }
      switch (st) {
        case Stage::Track: s.hypotheses(); break;
        case Stage::Supervise: s.decision(); break;
        case Stage::Finalize: s.trajectories(); break;
        case Stage::Annotate: s.annotations(); break;
        case Stage::Evaluate: s.report(); break;
      }
    }
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

Outcome determinism_persistence() {
  testing::TempDir root("acceptance_det");
  const Scenario sc = generate_scenario(random_scenario(8, 6, 5.0));
  const PipelineConfig cfg = PipelineConfig::defaults();

  Session a = Session::create(root / "a", sc.recording, sc.labels, cfg);
  run_all(a);
  const auto reference = artifacts(root / "a");

  // Rerun every stage from the saved session.
  Session reopened = Session::open(root / "a");
  run_all(reopened);
  std::vector<std::string> differ;
  const auto rerun = artifacts(root / "a");
  for (const auto& [name, bytes] : reference) {
    auto it = rerun.find(name);
    if (it == rerun.end() || it->second != bytes) differ.push_back(name);
  }
  if (rerun.size() != reference.size()) differ.push_back("file set");

  // Kill a worker at staggered points of the pipeline and reload.
  int kills = 0, bad_reloads = 0;
  std::string first_problem;
  for (int i = 0; i < 8; ++i) {
    const fs::path dir = root / ("crash" + std::to_string(i));
    Session::create(dir, sc.recording, sc.labels, cfg);
    const pid_t pid = fork();
    if (pid == 0) {
      try {
        Session s = Session::open(dir);
        run_all(s);
      } catch (...) {
        _exit(1);
      }
      _exit(0);
    }
    usleep(static_cast<useconds_t>(20000 + 60000 * i));
    if (kill(pid, SIGKILL) == 0) ++kills;
    int status = 0;
    waitpid(pid, &status, 0);
    try {
      Session s = Session::open(dir);
      std::string why = check_loadable(s);
      if (why.empty()) {
        run_all(s);
        auto after = artifacts(dir);
        for (const auto& [name, bytes] : reference) {
          if (name == session_files::kManifest) continue;
          auto it = after.find(name);
          if (it == after.end() || it->second != bytes) why = name + " differs after recovery";
        }
      }
      if (!why.empty()) {
        ++bad_reloads;
        if (first_problem.empty()) first_problem = why;
      }
    } catch (const std::exception& e) {
      ++bad_reloads;
      if (first_problem.empty()) first_problem = e.what();
    }
  }
  std::string detail = std::to_string(reference.size()) + " artifacts, " + std::to_string(differ.size()) +
                       " differ on rerun; " + std::to_string(kills) + " killed runs, " +
                       std::to_string(bad_reloads) + " bad reloads";
  for (const auto& d : differ) detail += " [" + d + "]";
  if (!first_problem.empty()) detail += " (" + first_problem + ")";
  return {differ.empty() && bad_reloads == 0, detail};
}

}  // namespace
}  // namespace baas

int main() {
  using baas::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"f1-consistency", baas::f1_consistency},
      {"metric-oracles", baas::metric_oracles},
      {"annotation-oracle", baas::annotation_oracle},
      {"tracking-coverage", baas::tracking_coverage},
      {"smoother-gain", baas::smoother_gain},
      {"step-trend", baas::step_trend},
      {"numerical-invariants", baas::numerical_invariants},
      {"determinism-persistence", baas::determinism_persistence},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %-24s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
