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


#pragma once

#include "baas/annotator.hpp"
#include "baas/config.hpp"
#include "baas/finalizer.hpp"
#include "baas/report.hpp"
#include "baas/scenario_io.hpp"
#include "baas/tracker.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace baas {

enum class Stage { Track, Supervise, Finalize, Annotate, Evaluate };

std::string_view to_string(Stage s);
Stage stage_from_string(std::string_view name);
const std::vector<Stage>& all_stages();

/// File names inside a session directory.
namespace session_files {
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kRecording = "recording.jsonl";
inline constexpr const char* kLabels = "labels.jsonl";
inline constexpr const char* kHistory = "history.jsonl";
inline constexpr const char* kAssociations = "associations.jsonl";
inline constexpr const char* kDecision = "decision.json";
inline constexpr const char* kAudit = "audit.jsonl";
inline constexpr const char* kTrajectories = "trajectories.jsonl";
inline constexpr const char* kAnnotations = "annotations.jsonl";
inline constexpr const char* kAnnotationSummary = "annotation_summary.jsonl";
inline constexpr const char* kReport = "report.jsonl";
}  // namespace session_files

/// Artifact files written by a stage.
std::vector<std::string> stage_artifacts(Stage s);

struct AuditEntry {
  std::int64_t seq = 0;
  std::string time;    // UTC, ISO 8601
  std::string source;  // "cli", "api", ...
  std::string action;  // "submit" or "invalidate"
  std::optional<SupervisionDecision> decision;
};

/// A session is a directory holding the recording, an immutable config
/// snapshot and the artifacts of every completed stage. Stage completion is
/// recorded in the manifest only after the artifacts are in place.
class Session {
 public:
  static Session create(const std::filesystem::path& dir, const Recording& recording,
                        const std::optional<ManualLabelSet>& labels, const PipelineConfig& cfg);
  static Session open(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const { return dir_; }
  const std::string& id() const { return id_; }
  const PipelineConfig& config() const { return config_; }
  bool complete(Stage s) const;
  bool has_labels() const;
  Json manifest_json() const;

  /// Replaces the config; only allowed before tracking has run.
  void set_config(const PipelineConfig& cfg);

  /// Runs track, finalize, annotate or evaluate. Throws PreconditionError
  /// naming the missing prerequisite.
  void run_stage(Stage s);
  /// Validates and stores a decision, appends it to the audit log and drops
  /// every artifact downstream of supervision.
  void apply_supervision(const SupervisionDecision& decision, const std::string& source = "cli");

  const Recording& recording() const;
  ManualLabelSet labels() const;
  HypothesisSet hypotheses() const;
  std::optional<SupervisionDecision> decision() const;
  std::vector<ObjectTrajectory> trajectories() const;
  std::vector<AnnotationRecord> annotations() const;
  BorderFn annotation_border() const;
  Report report() const;
  std::vector<AuditEntry> audit() const;

 private:
  Session() = default;
  void save_manifest() const;
  void invalidate_from(Stage s);
  void require(Stage s, const char* what) const;
  void append_audit(const std::string& source, const std::string& action,
                    const std::optional<SupervisionDecision>& decision);

  void run_track();
  void run_finalize();
  void run_annotate();
  void run_evaluate();

  std::filesystem::path dir_;
  std::string id_;
  std::string recording_id_;
  PipelineConfig config_;
  std::map<Stage, bool> complete_;
  std::optional<BorderFn> border_;
  mutable std::optional<Recording> recording_;
};

/// Decision replayed from an audit log: the last submitted decision, or none
/// when the log ends with an invalidation.
std::optional<SupervisionDecision> replay_audit(std::span<const AuditEntry> entries,
                                                const HypothesisSet& hypotheses);

/// Decision a perfect supervisor would take given the manual labels: every
/// track that reached verified status and whose detections mostly belong to
/// one labeled object is accepted, and tracks sharing an object are merged.
SupervisionDecision oracle_decision(const HypothesisSet& hypotheses, const ManualLabelSet& labels);

/// Record of one scan for the review API: detections, hypotheses alive at k
/// and, when present, trajectories and annotations.
Json scan_view(const Session& session, std::int64_t k, const HypothesisSet* hypotheses,
               const std::vector<ObjectTrajectory>* trajectories,
               const std::vector<AnnotationRecord>* annotations);

/// Full history of one track.
Json track_view(const HypothesisSet& hypotheses, TrackId id);

}  // namespace baas
