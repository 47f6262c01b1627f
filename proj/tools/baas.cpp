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


// baas: command line driver for sessions.

#include "baas/config.hpp"
#include "baas/error.hpp"
#include "baas/report.hpp"
#include "baas/scenario_io.hpp"
#include "baas/service.hpp"
#include "baas/session.hpp"
#include "baas/synth.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace baas;

namespace {

Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

struct Options {
  std::string session;
  std::string config;
  std::optional<std::uint64_t> seed;
  // synth
  int objects = 5;
  double clutter = 5.0;
  double duration = 10.0;
  std::string scenario = "random";
  std::string pipeline;
  std::string recording;
  std::string labels;
  // supervise-import
  std::string decision;
  bool oracle = false;
  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
};

void cmd_synth(const Options& o) {
  SynthConfig sc;
  if (!o.config.empty()) {
    sc = decode_synth_config(Json::parse(read_file(o.config)));
    if (o.seed) sc.seed = *o.seed;
  } else if (o.scenario == "turning") {
    sc = turning_car_scenario(o.seed.value_or(1));
  } else {
    sc = random_scenario(o.seed.value_or(1), o.objects, o.clutter, o.duration);
  }
  const Scenario s = generate_scenario(sc);
  const PipelineConfig pc = o.pipeline.empty() ? PipelineConfig::defaults() : load_pipeline_config(o.pipeline);
  Session::create(o.session, s.recording, s.labels, pc);
  std::cout << "session " << o.session << ": " << s.recording.scans.size() << " scans, "
            << sc.objects.size() << " objects\n";
}

void cmd_import(const Options& o) {
  const Recording rec = load_recording(o.recording);
  std::optional<ManualLabelSet> labels;
  if (!o.labels.empty()) {
    labels = load_labels(o.labels);
    for (const std::string& w : cross_validate(*labels, rec)) std::cerr << "warning: " << w << '\n';
  }
  const PipelineConfig pc = o.config.empty() ? PipelineConfig::defaults() : load_pipeline_config(o.config);
  Session::create(o.session, rec, labels, pc);
  std::cout << "session " << o.session << ": " << rec.scans.size() << " scans\n";
}

void cmd_track(const Options& o) {
  Session s = Session::open(o.session);
  if (!o.config.empty()) s.set_config(load_pipeline_config(o.config));
  s.run_stage(Stage::Track);
  const HypothesisSet h = s.hypotheses();
  std::cout << h.tracks.size() << " track hypotheses\n";
}

void cmd_supervise(const Options& o) {
  Session s = Session::open(o.session);
  if (o.oracle == !o.decision.empty()) {
    throw ValidationError("supervise-import needs exactly one of --decision or --oracle");
  }
  const SupervisionDecision d =
      o.oracle ? oracle_decision(s.hypotheses(), s.labels()) : load_decision(o.decision);
  s.apply_supervision(d, "cli");
  std::cout << d.accepted.size() << " accepted tracks, " << d.merge_groups.size() << " merge groups\n";
}

void cmd_stage(const Options& o, Stage stage) {
  Session s = Session::open(o.session);
  s.run_stage(stage);
  if (stage == Stage::Evaluate) std::cout << format_report(s.report());
}

void cmd_report(const Options& o) {
  const Session s = Session::open(o.session);
  std::cout << format_report(s.report());
}

void cmd_serve(const Options& o) {
  Service service(o.session);
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "serving " << o.session << " on http://" << o.host << ':' << o.port << '\n' << std::flush;
  service.listen(o.host, o.port);
  g_service = nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BAAS offline radar auto-labeling"};
  app.require_subcommand(1);
  Options o;

  auto session_opt = [&](CLI::App* c) { c->add_option("--session", o.session, "Session directory")->required(); };

  auto* synth = app.add_subcommand("synth", "Create a session from a synthetic scenario");
  session_opt(synth);
  synth->add_option("--config", o.config, "Synthetic scenario JSON");
  synth->add_option("--seed", o.seed, "Random seed");
  synth->add_option("--scenario", o.scenario, "Built-in scenario")->check(CLI::IsMember({"random", "turning"}));
  synth->add_option("--objects", o.objects, "Object count of the random scenario")->check(CLI::Range(1, 64));
  synth->add_option("--clutter", o.clutter, "Clutter rate per scan")->check(CLI::NonNegativeNumber);
  synth->add_option("--duration", o.duration, "Duration in seconds")->check(CLI::PositiveNumber);
  synth->add_option("--pipeline", o.pipeline, "Pipeline config for the new session");

  auto* import = app.add_subcommand("import", "Create a session from recording and label files");
  session_opt(import);
  import->add_option("--recording", o.recording, "Recording JSON lines")->required();
  import->add_option("--labels", o.labels, "Manual labels JSON lines");
  import->add_option("--config", o.config, "Pipeline config");

  auto* track = app.add_subcommand("track", "Run the tracking stage");
  session_opt(track);
  track->add_option("--config", o.config, "Replace the pipeline config before tracking");
  track->add_option("--seed", o.seed, "Accepted for symmetry; tracking is deterministic");

  auto* supervise = app.add_subcommand("supervise-import", "Store a supervision decision");
  session_opt(supervise);
  supervise->add_option("--decision", o.decision, "Decision JSON file");
  supervise->add_flag("--oracle", o.oracle, "Derive the decision from the manual labels");

  auto* finalize = app.add_subcommand("finalize", "Refine and smooth accepted tracks");
  session_opt(finalize);
  auto* annotate = app.add_subcommand("annotate", "Annotate detections from trajectories");
  session_opt(annotate);
  auto* eval = app.add_subcommand("eval", "Evaluate every processing step");
  session_opt(eval);
  auto* report = app.add_subcommand("report", "Print the evaluation report");
  session_opt(report);

  auto* serve = app.add_subcommand("serve", "Serve the review API");
  session_opt(serve);
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--port", o.port, "Port")->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*synth) cmd_synth(o);
    else if (*import) cmd_import(o);
    else if (*track) cmd_track(o);
    else if (*supervise) cmd_supervise(o);
    else if (*finalize) cmd_stage(o, Stage::Finalize);
    else if (*annotate) cmd_stage(o, Stage::Annotate);
    else if (*eval) cmd_stage(o, Stage::Evaluate);
    else if (*report) cmd_report(o);
    else if (*serve) cmd_serve(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const DegenerateMatrixError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
