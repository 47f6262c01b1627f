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

#include "baas/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace baas {

namespace {

const char* const kStepNames[] = {"", "all tracks", "verified tracks", "supervised objects",
                                  "smoothed and aligned", "size and position corrected"};

// A non-empty map switches confusion() from identity to strict mapping.
std::map<ObjectId, ObjectId> strict(std::map<ObjectId, ObjectId> m) {
  if (m.empty()) m.emplace(std::numeric_limits<ObjectId>::min(), kClutterObject);
  return m;
}

}  // namespace

const std::vector<std::string>& report_metrics() {
  static const std::vector<std::string> names{
      "mota",          "motp",          "tracks_tp_per_scan", "tracks_fp_per_scan",
      "tracks_fn_per_scan", "tracks_mm", "det_tp_per_scan",   "det_fp_per_scan",
      "det_fn_per_scan", "det_tn_per_scan", "precision",      "recall",
      "f1",            "f1_arithmetic"};
  return names;
}

bool StepRow::available() const {
  return std::any_of(values.begin(), values.end(), [](const auto& v) { return v.second.has_value(); });
}

std::optional<double> StepRow::get(const std::string& metric) const {
  for (const auto& [name, value] : values) {
    if (name == metric) return value;
  }
  return std::nullopt;
}

EstimateSeries series_from_decision(const SupervisionDecision& decision,
                                    const HypothesisSet& hypotheses, std::size_t scan_count) {
  EstimateSeries out(scan_count);
  for (const SupervisedObject& obj : supervised_objects(decision)) {
    for (std::size_t k = 0; k < scan_count; ++k) {
      const auto kk = static_cast<std::int64_t>(k);
      Vec4 weighted = Vec4::Zero();
      Vec4 plain = Vec4::Zero();
      double total = 0.0;
      int alive = 0;
      for (TrackId id : obj.track_ids) {
        const TrackRecord* rec = hypotheses.find(id);
        if (rec == nullptr || rec->history.empty() || kk > rec->last_hit_k()) continue;
        const TrackSnapshot* s = rec->at(kk);
        if (s == nullptr) continue;
        const Vec4 x = s->state.mean4();
        const auto n = static_cast<double>(hypotheses.detections_of(id, kk).size());
        weighted += n * x;
        total += n;
        plain += x;
        ++alive;
      }
      if (alive == 0) continue;
      out[k].push_back({obj.object_id, total > 0.0 ? Vec4(weighted / total) : Vec4(plain / alive)});
    }
  }
  return out;
}

DetectionLabels labels_from_tracks(const HypothesisSet& hypotheses, bool verified_only) {
  DetectionLabels out;
  for (const TrackRecord& rec : hypotheses.tracks) {
    if (verified_only && !rec.ever(TrackStatus::Verified)) continue;
    for (const TrackSnapshot& s : rec.history) {
      for (DetId d : hypotheses.detections_of(rec.track_id, s.k)) out[s.k][d] = rec.track_id;
    }
  }
  return out;
}

DetectionLabels labels_from_decision(const SupervisionDecision& decision,
                                     const HypothesisSet& hypotheses) {
  DetectionLabels out;
  for (const SupervisedObject& obj : supervised_objects(decision)) {
    for (TrackId id : obj.track_ids) {
      const TrackRecord* rec = hypotheses.find(id);
      if (rec == nullptr) continue;
      for (const TrackSnapshot& s : rec->history) {
        for (DetId d : hypotheses.detections_of(id, s.k)) out[s.k][d] = obj.object_id;
      }
    }
  }
  return out;
}

StepRow unavailable_row(int step, const std::string& name) {
  StepRow row{step, name, {}};
  for (const auto& m : report_metrics()) row.values.emplace_back(m, std::nullopt);
  return row;
}

StepRow evaluate_step(int step, const std::string& name, const EstimateSeries& est,
                      const DetectionLabels& predicted, const EstimateSeries& truth,
                      const Recording& recording, const ManualLabelSet& labels, double gate) {
  const MatchEventLog log = match_tracks(est, truth, gate);
  const double n = std::max<double>(1.0, static_cast<double>(recording.scans.size()));
  auto guarded = [](auto fn) -> std::optional<double> {
    try {
      return fn();
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };
  const ConfusionCounts c = confusion(recording, predicted, labels, strict(majority_mapping(log)));
  const PrecisionRecall pr = precision_recall_f1(c);
  StepRow row{step, name, {}};
  const std::optional<double> values[] = {
      guarded([&] { return mota(log); }),
      guarded([&] { return motp(log); }),
      log.total_tp() / n,
      log.total_fp() / n,
      log.total_fn() / n,
      static_cast<double>(log.total_mm()),
      c.tp / n,
      c.fp / n,
      c.fn / n,
      c.tn / n,
      pr.precision,
      pr.recall,
      pr.f1,
      pr.f1_arithmetic};
  for (std::size_t i = 0; i < report_metrics().size(); ++i) {
    row.values.emplace_back(report_metrics()[i], values[i]);
  }
  return row;
}

Report evaluate_steps(const Recording& recording, const ManualLabelSet& labels,
                      const StepOutputs& outputs, const PipelineConfig& cfg) {
  const std::size_t n = recording.scans.size();
  const LabelTrackingResult gt = label_data_tracking(recording, labels, cfg.tracker);
  const EstimateSeries truth = series_from_tracks(gt.hypotheses, n, false);
  const double gate = cfg.match_gate;

  Report report;
  report.missed = gt.missed;
  if (outputs.hypotheses != nullptr) {
    const HypothesisSet& h = *outputs.hypotheses;
    report.rows.push_back(evaluate_step(1, kStepNames[1], series_from_tracks(h, n, false),
                                        labels_from_tracks(h, false), truth, recording, labels, gate));
    report.rows.push_back(evaluate_step(2, kStepNames[2], series_from_tracks(h, n, true),
                                        labels_from_tracks(h, true), truth, recording, labels, gate));
  } else {
    report.rows.push_back(unavailable_row(1, kStepNames[1]));
    report.rows.push_back(unavailable_row(2, kStepNames[2]));
  }
  if (outputs.hypotheses != nullptr && outputs.decision != nullptr) {
    report.rows.push_back(evaluate_step(3, kStepNames[3],
                                        series_from_decision(*outputs.decision, *outputs.hypotheses, n),
                                        labels_from_decision(*outputs.decision, *outputs.hypotheses),
                                        truth, recording, labels, gate));
  } else {
    report.rows.push_back(unavailable_row(3, kStepNames[3]));
  }
  auto trajectory_row = [&](int step, const std::vector<ObjectTrajectory>* trajs,
                            const AnnotationSet* ann) {
    if (trajs == nullptr || ann == nullptr) return unavailable_row(step, kStepNames[step]);
    return evaluate_step(step, kStepNames[step], series_from_trajectories(*trajs, n),
                         binary_labels(*ann), truth, recording, labels, gate);
  };
  report.rows.push_back(trajectory_row(4, outputs.refined, outputs.refined_annotations));
  report.rows.push_back(trajectory_row(5, outputs.final, outputs.final_annotations));
  return report;
}

void write_report(const Report& report, std::ostream& os) {
  for (const StepRow& row : report.rows) {
    for (const auto& [metric, value] : row.values) {
      Json j{{"step", row.step}, {"name", row.name}, {"metric", metric}};
      j["value"] = value ? Json(*value) : Json(nullptr);
      os << j.dump() << '\n';
    }
  }
  Json missed{{"step", 0}, {"name", "label data tracking"}, {"metric", "missed_objects"}};
  missed["value"] = report.missed;
  os << missed.dump() << '\n';
}

Report read_report(std::istream& is) {
  Report report;
  std::string line;
  std::size_t number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      const int step = j.at("step").get<int>();
      const std::string metric = j.at("metric").get<std::string>();
      if (step == 0) {
        report.missed = j.at("value").get<std::vector<ObjectId>>();
        continue;
      }
      if (report.rows.empty() || report.rows.back().step != step) {
        report.rows.push_back({step, j.at("name").get<std::string>(), {}});
      }
      const Json& v = j.at("value");
      report.rows.back().values.emplace_back(
          metric, v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
    } catch (const Json::exception& e) {
      throw ParseError(e.what(), number);
    }
  }
  return report;
}

void save_report(const Report& report, const std::filesystem::path& path) {
  std::ostringstream os;
  write_report(report, os);
  write_file_atomic(path, os.str());
}

Report load_report(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw NotFoundError("cannot open " + path.string());
  return read_report(is);
}

std::string format_report(const Report& report) {
  const std::pair<const char*, const char*> columns[] = {
      {"mota", "MOTA"},          {"motp", "MOTP"},       {"tracks_tp_per_scan", "TP/scan"},
      {"tracks_fp_per_scan", "FP/scan"}, {"tracks_fn_per_scan", "FN/scan"}, {"tracks_mm", "MM"},
      {"det_tp_per_scan", "dTP/scan"}, {"det_fp_per_scan", "dFP/scan"},
      {"det_fn_per_scan", "dFN/scan"}, {"det_tn_per_scan", "dTN/scan"},
      {"precision", "P"},        {"recall", "R"},        {"f1", "F1"},
      {"f1_arithmetic", "F1(am)"}};
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-4s %-28s", "step", "name");
  os << buf;
  for (const auto& c : columns) {
    std::snprintf(buf, sizeof buf, " %9s", c.second);
    os << buf;
  }
  os << '\n';
  for (const StepRow& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%-4d %-28s", row.step, row.name.c_str());
    os << buf;
    for (const auto& c : columns) {
      const auto v = row.get(c.first);
      if (v) std::snprintf(buf, sizeof buf, " %9.3f", *v);
      else std::snprintf(buf, sizeof buf, " %9s", "n/a");
      os << buf;
    }
    os << '\n';
  }
  os << "objects missed by label data tracking: " << report.missed.size() << '\n';
  return os.str();
}

}  // namespace baas
