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


#include "baas/session.hpp"

#include "baas/error.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

namespace baas {

namespace fs = std::filesystem;
using namespace session_files;

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Track: return "track";
    case Stage::Supervise: return "supervise";
    case Stage::Finalize: return "finalize";
    case Stage::Annotate: return "annotate";
    case Stage::Evaluate: return "evaluate";
  }
  return "track";
}

Stage stage_from_string(std::string_view name) {
  for (Stage s : all_stages()) {
    if (to_string(s) == name) return s;
  }
  throw ValidationError("unknown stage '" + std::string(name) + "'");
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages{Stage::Track, Stage::Supervise, Stage::Finalize,
                                         Stage::Annotate, Stage::Evaluate};
  return stages;
}

std::vector<std::string> stage_artifacts(Stage s) {
  switch (s) {
    case Stage::Track: return {kHistory, kAssociations};
    case Stage::Supervise: return {kDecision};
    case Stage::Finalize: return {kTrajectories};
    case Stage::Annotate: return {kAnnotations, kAnnotationSummary};
    case Stage::Evaluate: return {kReport};
  }
  return {};
}

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json parse_file(const fs::path& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw ParseError(path.filename().string() + ": " + e.what(), 1);
  }
}

Json snapshot_view(const TrackSnapshot& s, TrackId id) {
  const Vec4 x = s.state.mean4();
  Json j{{"track_id", id},
         {"k", s.k},
         {"status", std::string(to_string(s.status))},
         {"n_assoc", s.n_assoc},
         {"x", {x(0), x(1), x(2), x(3)}}};
  Json mu = Json::array();
  for (Eigen::Index i = 0; i < s.state.mu.size(); ++i) mu.push_back(s.state.mu(i));
  j["mu"] = std::move(mu);
  j["ellipse"] = ellipse_json(x.head<2>(), s.extent.X);
  return j;
}

}  // namespace

Session Session::create(const fs::path& dir, const Recording& recording,
                        const std::optional<ManualLabelSet>& labels, const PipelineConfig& cfg) {
  if (fs::exists(dir / kManifest)) {
    throw ValidationError("a session already exists in " + dir.string());
  }
  cfg.validate();
  validate(recording);
  fs::create_directories(dir);
  Session s;
  s.dir_ = dir;
  s.id_ = fs::absolute(dir).lexically_normal().filename().string();
  if (s.id_.empty()) s.id_ = "session";
  s.recording_id_ = recording.meta.id;
  s.config_ = cfg;
  for (Stage st : all_stages()) s.complete_[st] = false;
  save_recording(recording, dir / kRecording);
  if (labels) save_labels(*labels, dir / kLabels);
  s.recording_ = recording;
  s.save_manifest();
  return s;
}

Session Session::open(const fs::path& dir) {
  if (!fs::exists(dir / kManifest)) throw NotFoundError("no session in " + dir.string());
  const Json m = parse_file(dir / kManifest);
  Session s;
  s.dir_ = dir;
  try {
    s.id_ = m.at("session_id").get<std::string>();
    s.recording_id_ = m.at("recording_id").get<std::string>();
    s.config_ = decode_pipeline_config(m.at("config"));
    const Json& stages = m.at("stages");
    for (Stage st : all_stages()) s.complete_[st] = stages.value(std::string(to_string(st)), false);
    if (m.contains("border")) s.border_ = decode_border(m["border"]);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  // A stage whose artifacts went missing is incomplete, and so is everything after it.
  bool broken = false;
  for (Stage st : all_stages()) {
    if (broken) {
      s.complete_[st] = false;
      continue;
    }
    if (!s.complete_[st]) continue;
    for (const auto& f : stage_artifacts(st)) {
      if (!fs::exists(dir / f)) broken = true;
    }
    if (broken) s.complete_[st] = false;
  }
  return s;
}

bool Session::complete(Stage s) const {
  auto it = complete_.find(s);
  return it != complete_.end() && it->second;
}

bool Session::has_labels() const { return fs::exists(dir_ / kLabels); }

Json Session::manifest_json() const {
  Json stages = Json::object();
  for (Stage st : all_stages()) stages[std::string(to_string(st))] = complete(st);
  Json m{{"session_id", id_},
         {"recording_id", recording_id_},
         {"labels", has_labels()},
         {"stages", std::move(stages)},
         {"config", encode(config_)}};
  if (border_) m["border"] = encode(*border_);
  return m;
}

void Session::save_manifest() const {
  write_file_atomic(dir_ / kManifest, manifest_json().dump(2) + "\n");
}

void Session::set_config(const PipelineConfig& cfg) {
  if (complete(Stage::Track) || fs::exists(dir_ / kHistory)) {
    throw PreconditionError("the config snapshot is fixed once tracking has run");
  }
  cfg.validate();
  config_ = cfg;
  save_manifest();
}

void Session::invalidate_from(Stage s) {
  bool on = false;
  std::vector<Stage> dropped;
  for (Stage st : all_stages()) {
    if (st == s) on = true;
    if (!on) continue;
    complete_[st] = false;
    dropped.push_back(st);
    if (st == Stage::Annotate) border_.reset();
  }
  save_manifest();
  for (Stage st : dropped) {
    for (const auto& f : stage_artifacts(st)) fs::remove(dir_ / f);
  }
}

void Session::require(Stage s, const char* what) const {
  if (!complete(s)) {
    throw PreconditionError(std::string(what) + " requires the " + std::string(to_string(s)) +
                            " stage to be complete");
  }
}

void Session::append_audit(const std::string& source, const std::string& action,
                           const std::optional<SupervisionDecision>& decision) {
  const std::int64_t seq = static_cast<std::int64_t>(audit().size());
  Json j{{"seq", seq}, {"time", utc_now()}, {"source", source}, {"action", action}};
  j["decision"] = decision ? encode(*decision) : Json(nullptr);
  std::ofstream os(dir_ / kAudit, std::ios::app);
  if (!os) throw Error("cannot append to the audit log");
  os << j.dump() << '\n';
  os.flush();
}

void Session::run_stage(Stage s) {
  switch (s) {
    case Stage::Track: run_track(); break;
    case Stage::Supervise:
      throw ValidationError("supervision is applied with a decision, not run as a stage");
    case Stage::Finalize: run_finalize(); break;
    case Stage::Annotate: run_annotate(); break;
    case Stage::Evaluate: run_evaluate(); break;
  }
}

void Session::run_track() {
  const bool had_decision = complete(Stage::Supervise);
  complete_[Stage::Track] = false;
  invalidate_from(Stage::Finalize);
  const HypothesisSet hyps = run_eot(recording(), config_.tracker);
  save_hypotheses(hyps, dir_ / kHistory, dir_ / kAssociations);
  complete_[Stage::Track] = true;
  if (had_decision) {
    const auto d = decision();
    if (!d || !validation_errors(*d, hyps).empty()) {
      complete_[Stage::Supervise] = false;
      save_manifest();
      fs::remove(dir_ / kDecision);
      append_audit("track", "invalidate", std::nullopt);
    }
  }
  save_manifest();
}

void Session::apply_supervision(const SupervisionDecision& d, const std::string& source) {
  require(Stage::Track, "supervision");
  validate(d, hypotheses());
  invalidate_from(Stage::Supervise);
  save_decision(d, dir_ / kDecision);
  append_audit(source, "submit", d);
  complete_[Stage::Supervise] = true;
  save_manifest();
}

void Session::run_finalize() {
  require(Stage::Track, "finalize");
  if (!complete(Stage::Supervise)) {
    throw PreconditionError("finalize requires a submitted supervision decision");
  }
  invalidate_from(Stage::Finalize);
  const auto trajs = finalize(*decision(), hypotheses(), recording(), config_.finalizer());
  save_trajectories(trajs, dir_ / kTrajectories);
  complete_[Stage::Finalize] = true;
  save_manifest();
}

void Session::run_annotate() {
  require(Stage::Finalize, "annotate");
  invalidate_from(Stage::Annotate);
  const auto trajs = trajectories();
  AnnotatorConfig acfg = config_.annotator;
  if (has_labels() && !config_.border_candidates.empty()) {
    const ManualLabelSet manual = labels();
    const std::size_t n = recording().scans.size();
    const auto gt = label_data_tracking(recording(), manual, config_.tracker);
    const auto log = match_tracks(series_from_trajectories(trajs, n),
                                  series_from_tracks(gt.hypotheses, n, false), config_.match_gate);
    const auto best = optimize_border(manual, trajs, recording(), config_.border_candidates, acfg,
                                      majority_mapping(log));
    acfg.border = best.best;
  }
  const AnnotationSet set = annotate_recording(trajs, recording(), acfg);
  save_annotations(set.records, dir_ / kAnnotations);
  std::ostringstream summary;
  write_annotation_summary(set, recording().scans.size(), summary);
  write_file_atomic(dir_ / kAnnotationSummary, summary.str());
  border_ = acfg.border;
  complete_[Stage::Annotate] = true;
  save_manifest();
}

void Session::run_evaluate() {
  require(Stage::Track, "evaluate");
  if (!has_labels()) throw PreconditionError("evaluate requires manual labels in the session");
  complete_[Stage::Evaluate] = false;
  save_manifest();
  fs::remove(dir_ / kReport);

  const HypothesisSet hyps = hypotheses();
  StepOutputs out;
  out.hypotheses = &hyps;
  const auto d = complete(Stage::Supervise) ? decision() : std::nullopt;
  if (d) out.decision = &*d;

  AnnotatorConfig acfg = config_.annotator;
  acfg.border = annotation_border();
  std::vector<ObjectTrajectory> refined, final_trajs;
  AnnotationSet refined_ann, final_ann;
  if (d && complete(Stage::Annotate)) {
    refined = finalize(*d, hyps, recording(), config_.finalizer({true, true, false}));
    refined_ann = annotate_recording(refined, recording(), acfg);
    out.refined = &refined;
    out.refined_annotations = &refined_ann;
    final_trajs = trajectories();
    final_ann.records = annotations();
    final_ann.config = acfg;
    out.final = &final_trajs;
    out.final_annotations = &final_ann;
  }
  save_report(evaluate_steps(recording(), labels(), out, config_), dir_ / kReport);
  complete_[Stage::Evaluate] = true;
  save_manifest();
}

const Recording& Session::recording() const {
  if (!recording_) recording_ = load_recording(dir_ / kRecording);
  return *recording_;
}

ManualLabelSet Session::labels() const {
  if (!has_labels()) throw NotFoundError("session has no manual labels");
  return load_labels(dir_ / kLabels);
}

HypothesisSet Session::hypotheses() const {
  require(Stage::Track, "reading hypotheses");
  return load_hypotheses(dir_ / kHistory, dir_ / kAssociations);
}

std::optional<SupervisionDecision> Session::decision() const {
  if (!complete(Stage::Supervise) || !fs::exists(dir_ / kDecision)) return std::nullopt;
  return load_decision(dir_ / kDecision);
}

std::vector<ObjectTrajectory> Session::trajectories() const {
  require(Stage::Finalize, "reading trajectories");
  return load_trajectories(dir_ / kTrajectories);
}

std::vector<AnnotationRecord> Session::annotations() const {
  require(Stage::Annotate, "reading annotations");
  return load_annotations(dir_ / kAnnotations);
}

BorderFn Session::annotation_border() const { return border_ ? *border_ : config_.annotator.border; }

Report Session::report() const {
  require(Stage::Evaluate, "reading the report");
  return load_report(dir_ / kReport);
}

std::vector<AuditEntry> Session::audit() const {
  std::vector<AuditEntry> out;
  if (!fs::exists(dir_ / kAudit)) return out;
  std::ifstream is(dir_ / kAudit);
  std::string line;
  std::size_t number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      AuditEntry e;
      e.seq = j.at("seq").get<std::int64_t>();
      e.time = j.at("time").get<std::string>();
      e.source = j.at("source").get<std::string>();
      e.action = j.at("action").get<std::string>();
      if (!j.at("decision").is_null()) e.decision = decode_decision(j["decision"]);
      out.push_back(std::move(e));
    } catch (const Json::exception& e) {
      throw ParseError(e.what(), number);
    }
  }
  return out;
}

std::optional<SupervisionDecision> replay_audit(std::span<const AuditEntry> entries,
                                                const HypothesisSet& hypotheses) {
  std::optional<SupervisionDecision> current;
  for (const AuditEntry& e : entries) {
    if (e.action == "invalidate") {
      current.reset();
    } else if (e.action == "submit" && e.decision) {
      validate(*e.decision, hypotheses);
      current = e.decision;
    }
  }
  return current;
}

SupervisionDecision oracle_decision(const HypothesisSet& hypotheses, const ManualLabelSet& labels) {
  std::map<ObjectId, std::vector<TrackId>> by_object;
  for (const TrackRecord& rec : hypotheses.tracks) {
    if (!rec.ever(TrackStatus::Verified)) continue;
    std::map<ObjectId, long> votes;
    long total = 0;
    for (const TrackSnapshot& s : rec.history) {
      const ScanLabels* sl = labels.find(s.k);
      for (DetId d : hypotheses.detections_of(rec.track_id, s.k)) {
        ++total;
        if (sl == nullptr) continue;
        auto it = sl->labels.find(d);
        if (it != sl->labels.end()) ++votes[it->second];
      }
    }
    ObjectId best = kClutterObject;
    long best_votes = 0;
    for (const auto& [obj, n] : votes) {
      if (n > best_votes) {
        best = obj;
        best_votes = n;
      }
    }
    if (best == kClutterObject || 2 * best_votes <= total) continue;
    by_object[best].push_back(rec.track_id);
  }
  SupervisionDecision d;
  for (auto& [obj, ids] : by_object) {
    std::sort(ids.begin(), ids.end());
    d.accepted.insert(d.accepted.end(), ids.begin(), ids.end());
    if (ids.size() > 1) d.merge_groups.push_back(ids);
    auto cls = labels.classes.find(obj);
    d.classes[ids.front()] = cls == labels.classes.end() ? ObjectClass::Other : cls->second;
  }
  std::sort(d.accepted.begin(), d.accepted.end());
  std::sort(d.merge_groups.begin(), d.merge_groups.end());
  return d;
}

Json scan_view(const Session& session, std::int64_t k, const HypothesisSet* hypotheses,
               const std::vector<ObjectTrajectory>* trajectories,
               const std::vector<AnnotationRecord>* annotations) {
  Json j = encode(session.recording().scan(k));
  if (hypotheses != nullptr) {
    Json hyps = Json::array();
    for (const TrackRecord& rec : hypotheses->tracks) {
      const TrackSnapshot* s = rec.at(k);
      if (s == nullptr) continue;
      Json h = snapshot_view(*s, rec.track_id);
      h["detections"] = hypotheses->detections_of(rec.track_id, k);
      hyps.push_back(std::move(h));
    }
    j["hypotheses"] = std::move(hyps);
  }
  if (trajectories != nullptr) {
    Json list = Json::array();
    for (const ObjectTrajectory& t : *trajectories) {
      const TrajectoryState* s = t.at(k);
      if (s == nullptr) continue;
      list.push_back({{"object_id", t.object_id},
                      {"class", std::string(to_string(t.object_class))},
                      {"x", {s->x(0), s->x(1), s->x(2), s->x(3)}},
                      {"alpha", s->alpha},
                      {"ellipse", ellipse_json(s->x.head<2>(), s->X)}});
    }
    j["trajectories"] = std::move(list);
  }
  if (annotations != nullptr) {
    Json list = Json::array();
    for (const AnnotationRecord& r : *annotations) {
      if (r.k == k) list.push_back(encode(r));
    }
    j["annotations"] = std::move(list);
  }
  return j;
}

Json track_view(const HypothesisSet& hypotheses, TrackId id) {
  const TrackRecord* rec = hypotheses.find(id);
  if (rec == nullptr) throw NotFoundError("no track " + std::to_string(id));
  Json history = Json::array();
  for (const TrackSnapshot& s : rec->history) {
    Json h = snapshot_view(s, id);
    h["detections"] = hypotheses.detections_of(id, s.k);
    history.push_back(std::move(h));
  }
  return Json{{"track_id", id},
              {"failed", rec->failed},
              {"failure", rec->failure},
              {"history", std::move(history)}};
}

}  // namespace baas
