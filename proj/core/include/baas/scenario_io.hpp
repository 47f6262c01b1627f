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

// Line-delimited JSON files: one scan (or one scan's labels, one trajectory,
// one annotation record, one track snapshot) per line.

#include "baas/annotator.hpp"
#include "baas/finalizer.hpp"
#include "baas/tracker.hpp"
#include "baas/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace baas {

using Json = nlohmann::ordered_json;

// Record encoders / decoders. Decoders throw ValidationError on schema
// violations; the file readers rethrow them as ParseError with a line number.
Json encode(const RadarScan& scan);
RadarScan decode_scan(const Json& j);
Json encode(const ScanLabels& labels, const ManualLabelSet& set);
Json encode(const ObjectTrajectory& traj);
ObjectTrajectory decode_trajectory(const Json& j);
Json encode(const AnnotationRecord& r);
AnnotationRecord decode_annotation(const Json& j);
Json encode(const TrackSnapshot& s, TrackId id);
Json encode(const ScanAssociation& a);
ScanAssociation decode_association(const Json& j);
Json encode(const SupervisionDecision& d);
SupervisionDecision decode_decision(const Json& j);
Json encode(const BorderFn& fn);
BorderFn decode_border(const Json& j);
Json encode(const SizeBounds& b);
SizeBounds decode_size_bounds(const Json& j);

/// Ellipse parameters (center, semi-axes, major-axis angle) of an extent.
Json ellipse_json(const Vec2& center, const Mat2& X);

void write_recording(const Recording& rec, std::ostream& os);
Recording read_recording(std::istream& is);
void save_recording(const Recording& rec, const std::filesystem::path& path);
Recording load_recording(const std::filesystem::path& path);

/// Structural checks shared by the reader and the generator.
void validate(const Recording& rec);

void write_labels(const ManualLabelSet& labels, std::ostream& os);
ManualLabelSet read_labels(std::istream& is);
void save_labels(const ManualLabelSet& labels, const std::filesystem::path& path);
ManualLabelSet load_labels(const std::filesystem::path& path);

/// Labels that do not match the recording (unknown scans or detections).
std::vector<std::string> cross_validate(const ManualLabelSet& labels, const Recording& rec);

void write_trajectories(const std::vector<ObjectTrajectory>& trajs, std::ostream& os);
std::vector<ObjectTrajectory> read_trajectories(std::istream& is);
void save_trajectories(const std::vector<ObjectTrajectory>& trajs, const std::filesystem::path& path);
std::vector<ObjectTrajectory> load_trajectories(const std::filesystem::path& path);

void write_annotations(const std::vector<AnnotationRecord>& records, std::ostream& os);
std::vector<AnnotationRecord> read_annotations(std::istream& is);
void save_annotations(const std::vector<AnnotationRecord>& records, const std::filesystem::path& path);
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path);

/// Threshold configuration followed by per-scan record counts.
void write_annotation_summary(const AnnotationSet& set, std::size_t scan_count, std::ostream& os);

void write_history(const HypothesisSet& hyps, std::ostream& os);
void write_associations(const HypothesisSet& hyps, std::ostream& os);
/// Rebuilds a hypothesis set from its history and association files.
HypothesisSet read_hypotheses(std::istream& history, std::istream& associations);
void save_hypotheses(const HypothesisSet& hyps, const std::filesystem::path& history,
                     const std::filesystem::path& associations);
HypothesisSet load_hypotheses(const std::filesystem::path& history,
                              const std::filesystem::path& associations);

SupervisionDecision load_decision(const std::filesystem::path& path);
void save_decision(const SupervisionDecision& d, const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace baas
