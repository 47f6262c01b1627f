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


#include "baas/service.hpp"

#include "baas/error.hpp"

#include <httplib.h>

#include <condition_variable>
#include <mutex>
#include <optional>
#include <thread>

namespace baas {

namespace {

// Loaded artifacts of the last completed stages; immutable once built.
struct Snapshot {
  explicit Snapshot(Session s) : session(std::move(s)) {
    if (session.complete(Stage::Track)) hypotheses = session.hypotheses();
    decision = session.decision();
    if (session.complete(Stage::Finalize)) trajectories = session.trajectories();
    if (session.complete(Stage::Annotate)) annotations = session.annotations();
    if (session.complete(Stage::Evaluate)) report = session.report();
  }
  Session session;
  std::optional<HypothesisSet> hypotheses;
  std::optional<SupervisionDecision> decision;
  std::optional<std::vector<ObjectTrajectory>> trajectories;
  std::optional<std::vector<AnnotationRecord>> annotations;
  std::optional<Report> report;
};

struct StageStatus {
  std::string state = "idle";  // idle, running, succeeded, failed
  std::string error;
};

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response& res, int status, const std::string& code, const std::string& reason) {
  reply(res, status, Json{{"error", code}, {"reason", reason}});
}

std::optional<std::int64_t> parse_int(const std::string& s) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

struct Service::State {
  std::filesystem::path dir;
  httplib::Server server;

  std::mutex snapshot_mutex;
  std::shared_ptr<const Snapshot> snapshot;

  std::mutex writer;  // one writer per session
  std::mutex status_mutex;
  std::condition_variable idle;
  std::map<Stage, StageStatus> status;
  bool running = false;
  std::thread worker;

  std::shared_ptr<const Snapshot> current() {
    std::lock_guard lock(snapshot_mutex);
    return snapshot;
  }

  void refresh() {
    auto next = std::make_shared<const Snapshot>(Session::open(dir));
    std::lock_guard lock(snapshot_mutex);
    snapshot = std::move(next);
  }

  Json status_json(Stage s) {
    std::lock_guard lock(status_mutex);
    const StageStatus& st = status[s];
    Json j{{"stage", std::string(to_string(s))},
           {"state", st.state},
           {"complete", current()->session.complete(s)}};
    j["error"] = st.error.empty() ? Json(nullptr) : Json(st.error);
    return j;
  }

  void routes();
  void launch(Stage s, httplib::Response& res);
};

void Service::State::launch(Stage s, httplib::Response& res) {
  const auto snap = current();
  const Session& session = snap->session;
  std::string missing;
  switch (s) {
    case Stage::Track: break;
    case Stage::Supervise:
      fail(res, 400, "bad_stage", "supervision is submitted through POST /api/decision");
      return;
    case Stage::Finalize:
      if (!session.complete(Stage::Track)) missing = "track";
      else if (!session.complete(Stage::Supervise)) missing = "supervise";
      break;
    case Stage::Annotate:
      if (!session.complete(Stage::Finalize)) missing = "finalize";
      break;
    case Stage::Evaluate:
      if (!session.complete(Stage::Track)) missing = "track";
      else if (!session.has_labels()) missing = "labels";
      break;
  }
  if (!missing.empty()) {
    fail(res, 409, "precondition", std::string(to_string(s)) + " requires " + missing);
    return;
  }
  {
    std::lock_guard lock(status_mutex);
    if (running) {
      fail(res, 409, "busy", "another stage is running");
      return;
    }
    running = true;
    status[s] = {"running", ""};
  }
  if (worker.joinable()) worker.join();
  worker = std::thread([this, s] {
    StageStatus result{"succeeded", ""};
    try {
      std::lock_guard w(writer);
      Session session = Session::open(dir);
      session.run_stage(s);
    } catch (const std::exception& e) {
      result = {"failed", e.what()};
    }
    try {
      refresh();
    } catch (const std::exception& e) {
      if (result.error.empty()) result = {"failed", e.what()};
    }
    std::lock_guard lock(status_mutex);
    status[s] = result;
    running = false;
    idle.notify_all();
  });
  reply(res, 202, Json{{"stage", std::string(to_string(s))}, {"state", "running"}});
}

void Service::State::routes() {
  server.Get("/api/session", [this](const httplib::Request&, httplib::Response& res) {
    const auto snap = current();
    Json j = snap->session.manifest_json();
    j["scan_count"] = snap->session.recording().scans.size();
    Json stages = Json::object();
    for (Stage s : all_stages()) stages[std::string(to_string(s))] = status_json(s);
    j["stage_status"] = std::move(stages);
    reply(res, 200, j);
  });

  server.Get("/api/scans", [this](const httplib::Request& req, httplib::Response& res) {
    const auto snap = current();
    const auto n = static_cast<std::int64_t>(snap->session.recording().scans.size());
    const auto k0 = req.has_param("k0") ? parse_int(req.get_param_value("k0")) : std::optional<std::int64_t>(0);
    const auto k1 = req.has_param("k1") ? parse_int(req.get_param_value("k1")) : std::optional<std::int64_t>(*k0 + 1);
    if (!k0 || !k1 || *k0 < 0 || *k1 <= *k0) {
      fail(res, 400, "bad_request", "k0 and k1 must be integers with 0 <= k0 < k1");
      return;
    }
    if (*k1 > n) {
      fail(res, 404, "not_found", "scan window exceeds the recording of " + std::to_string(n) + " scans");
      return;
    }
    Json scans = Json::array();
    for (std::int64_t k = *k0; k < *k1; ++k) {
      scans.push_back(scan_view(snap->session, k, snap->hypotheses ? &*snap->hypotheses : nullptr,
                                snap->trajectories ? &*snap->trajectories : nullptr,
                                snap->annotations ? &*snap->annotations : nullptr));
    }
    reply(res, 200, Json{{"k0", *k0}, {"k1", *k1}, {"scans", std::move(scans)}});
  });

  server.Get(R"(/api/tracks/(-?\d+))", [this](const httplib::Request& req, httplib::Response& res) {
    const auto snap = current();
    const auto id = parse_int(req.matches[1]);
    if (!snap->hypotheses) {
      fail(res, 409, "precondition", "tracking has not run");
      return;
    }
    try {
      reply(res, 200, track_view(*snap->hypotheses, *id));
    } catch (const NotFoundError& e) {
      fail(res, 404, "not_found", e.what());
    }
  });

  server.Post("/api/decision", [this](const httplib::Request& req, httplib::Response& res) {
    SupervisionDecision d;
    try {
      d = decode_decision(Json::parse(req.body));
    } catch (const Json::exception& e) {
      fail(res, 400, "malformed", e.what());
      return;
    } catch (const ValidationError& e) {
      fail(res, 400, "malformed", e.what());
      return;
    }
    {
      std::lock_guard lock(status_mutex);
      if (running) {
        fail(res, 409, "busy", "a stage is running");
        return;
      }
    }
    std::lock_guard w(writer);
    Session session = Session::open(dir);
    if (!session.complete(Stage::Track)) {
      fail(res, 409, "precondition", "supervision requires the track stage to be complete");
      return;
    }
    const auto errors = validation_errors(d, session.hypotheses());
    if (!errors.empty()) {
      reply(res, 400, Json{{"error", "invalid_decision"}, {"reason", errors.front()}, {"errors", errors}});
      return;
    }
    session.apply_supervision(d, "api");
    refresh();
    reply(res, 200, Json{{"accepted", true}, {"decision", encode(d)}});
  });

  server.Post(R"(/api/stages/([a-z]+))", [this](const httplib::Request& req, httplib::Response& res) {
    Stage s;
    try {
      s = stage_from_string(req.matches[1].str());
    } catch (const ValidationError& e) {
      fail(res, 400, "bad_stage", e.what());
      return;
    }
    launch(s, res);
  });

  server.Get(R"(/api/stages/([a-z]+)/status)", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      reply(res, 200, status_json(stage_from_string(req.matches[1].str())));
    } catch (const ValidationError& e) {
      fail(res, 404, "not_found", e.what());
    }
  });

  server.Get("/api/report", [this](const httplib::Request&, httplib::Response& res) {
    const auto snap = current();
    if (!snap->report) {
      fail(res, 404, "not_found", "the evaluate stage has not run");
      return;
    }
    std::ostringstream lines;
    write_report(*snap->report, lines);
    Json records = Json::array();
    std::istringstream is(lines.str());
    std::string line;
    while (std::getline(is, line)) records.push_back(Json::parse(line));
    reply(res, 200, Json{{"records", std::move(records)}, {"table", format_report(*snap->report)}});
  });

  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const ValidationError& e) {
      fail(res, 400, "validation", e.what());
    } catch (const NotFoundError& e) {
      fail(res, 404, "not_found", e.what());
    } catch (const std::exception& e) {
      fail(res, 500, "internal", e.what());
    }
  });
}

Service::Service(const std::filesystem::path& session_dir) : state_(std::make_unique<State>()) {
  state_->dir = session_dir;
  state_->refresh();
  state_->routes();
}

Service::~Service() {
  stop();
  if (state_->worker.joinable()) state_->worker.join();
}

void Service::listen(const std::string& host, int port) {
  if (!state_->server.bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  run();
}

int Service::bind_any(const std::string& host) {
  const int port = state_->server.bind_to_any_port(host);
  if (port < 0) throw Error("cannot bind " + host);
  return port;
}

void Service::run() { state_->server.listen_after_bind(); }

void Service::stop() { state_->server.stop(); }

void Service::wait_idle() {
  std::unique_lock lock(state_->status_mutex);
  state_->idle.wait(lock, [this] { return !state_->running; });
}

}  // namespace baas
