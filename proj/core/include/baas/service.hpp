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

#include "baas/session.hpp"

#include <filesystem>
#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace baas {

/// HTTP review API over one session directory.
///
///   GET  /api/session                 manifest, stage flags, scan count
///   GET  /api/scans?k0=&k1=           scans [k0, k1) with hypotheses and artifacts
///   GET  /api/tracks/{id}             track history
///   POST /api/decision                submit a supervision decision
///   POST /api/stages/{stage}          launch a stage (asynchronous)
///   GET  /api/stages/{stage}/status   poll a stage
///   GET  /api/report                  evaluation report
///
/// Reads are served from the last completed artifacts while a stage runs.
/// Errors carry {"error": code, "reason": text}.
class Service {
 public:
  explicit Service(const std::filesystem::path& session_dir);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds and blocks until stop(). Throws Error when binding fails.
  void listen(const std::string& host, int port);
  /// Binds to a free port and returns it; serve with run() afterwards.
  int bind_any(const std::string& host);
  void run();
  void stop();
  /// Waits for a launched stage to finish.
  void wait_idle();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace baas
