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
#include "baas/evaluator.hpp"
#include "baas/finalizer.hpp"
#include "baas/tracker.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace baas {

/// Metric names of a report row, in output order.
const std::vector<std::string>& report_metrics();

struct StepRow {
  int step = 0;
  std::string name;
  std::vector<std::pair<std::string, std::optional<double>>> values;  // report_metrics() order

  bool available() const;
  std::optional<double> get(const std::string& metric) const;
  bool operator==(const StepRow&) const = default;
};

struct Report {
  std::vector<StepRow> rows;
  std::vector<ObjectId> missed;  // objects label data tracking never verified
  bool operator==(const Report&) const = default;
};

/// Outputs of the five processing steps. Null members mark a step whose
/// output is missing; its row is reported unavailable.
struct StepOutputs {
  const HypothesisSet* hypotheses = nullptr;           // steps 1 to 3
  const SupervisionDecision* decision = nullptr;       // step 3
  const std::vector<ObjectTrajectory>* refined = nullptr;  // step 4
  const AnnotationSet* refined_annotations = nullptr;
  const std::vector<ObjectTrajectory>* final = nullptr;  // step 5
  const AnnotationSet* final_annotations = nullptr;
};

/// Per scan, the mean state of the object's member tracks weighted by their
/// detection counts (plain mean while all members coast). Object ids follow
/// supervised_objects().
EstimateSeries series_from_decision(const SupervisionDecision& decision,
                                    const HypothesisSet& hypotheses, std::size_t scan_count);

/// Detections attributed to tracks by the tracker's association.
DetectionLabels labels_from_tracks(const HypothesisSet& hypotheses, bool verified_only);
/// Same, relabeled with the object ids of a decision.
DetectionLabels labels_from_decision(const SupervisionDecision& decision,
                                     const HypothesisSet& hypotheses);

/// One report row from an estimate series and its detection labels.
StepRow evaluate_step(int step, const std::string& name, const EstimateSeries& est,
                      const DetectionLabels& predicted, const EstimateSeries& truth,
                      const Recording& recording, const ManualLabelSet& labels, double gate);

StepRow unavailable_row(int step, const std::string& name);

Report evaluate_steps(const Recording& recording, const ManualLabelSet& labels,
                      const StepOutputs& outputs, const PipelineConfig& cfg);

void write_report(const Report& report, std::ostream& os);
Report read_report(std::istream& is);
void save_report(const Report& report, const std::filesystem::path& path);
Report load_report(const std::filesystem::path& path);

/// Plain-text table, one line per step.
std::string format_report(const Report& report);

}  // namespace baas
