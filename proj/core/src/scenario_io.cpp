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

#include "baas/scenario_io.hpp"

#include "baas/error.hpp"
#include "baas/geometry.hpp"
#include "baas/stats.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace baas {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ValidationError(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(std::string("field '") + key + "' must be finite");
  return x;
}

std::int64_t integer(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw ValidationError(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::string text(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

const Json& array(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) throw ValidationError(std::string("field '") + key + "' must be an array");
  return v;
}

template <typename Derived>
Json matrix_json(const Eigen::MatrixBase<Derived>& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

Eigen::MatrixXd matrix_from(const Json& j, const char* key, Eigen::Index rows, Eigen::Index cols) {
  const Json& a = array(j, key);
  if (static_cast<Eigen::Index>(a.size()) != rows * cols) {
    throw ValidationError(std::string("field '") + key + "' must hold " +
                          std::to_string(rows * cols) + " numbers");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows * cols; ++i) {
    const Json& v = a[static_cast<std::size_t>(i)];
    if (!v.is_number()) throw ValidationError(std::string("field '") + key + "' must hold numbers");
    m(i / cols, i % cols) = v.get<double>();
  }
  if (!m.allFinite()) throw ValidationError(std::string("field '") + key + "' must be finite");
  return m;
}

template <typename Fn>
void for_each_line(std::istream& is, Fn&& fn) {
  std::string line;
  std::size_t number_of_line = 0;
  while (std::getline(is, line)) {
    ++number_of_line;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      throw ParseError(e.what(), number_of_line);
    }
    try {
      fn(j, number_of_line);
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), number_of_line);
    } catch (const Json::exception& e) {
      throw ParseError(e.what(), number_of_line);
    }
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open " + path.string());
  return is;
}

template <typename Writer>
void save_with(const std::filesystem::path& path, Writer&& writer) {
  std::ostringstream os;
  writer(os);
  write_file_atomic(path, os.str());
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw NotFoundError("cannot open " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// --- scans ---------------------------------------------------------------

Json encode(const RadarScan& scan) {
  Json ego{{"x", scan.ego.x}, {"y", scan.ego.y}, {"yaw", scan.ego.yaw}, {"v", scan.ego.v},
           {"yaw_rate", scan.ego.yaw_rate}};
  if (!scan.ego.sensors.empty()) {
    Json sensors = Json::array();
    for (const auto& s : scan.ego.sensors) {
      sensors.push_back({{"x", s.x}, {"y", s.y}, {"boresight", s.boresight}});
    }
    ego["sensors"] = std::move(sensors);
  }
  Json dets = Json::array();
  for (const auto& d : scan.detections) {
    dets.push_back({{"id", d.id}, {"x", d.x}, {"y", d.y}, {"vr", d.vr}, {"R", matrix_json(d.noise)}});
  }
  return Json{{"k", scan.k}, {"t", scan.t}, {"ego", std::move(ego)}, {"detections", std::move(dets)}};
}

RadarScan decode_scan(const Json& j) {
  RadarScan scan;
  scan.k = integer(j, "k");
  scan.t = number(j, "t");
  const Json& ego = field(j, "ego");
  scan.ego.x = number(ego, "x");
  scan.ego.y = number(ego, "y");
  scan.ego.yaw = number(ego, "yaw");
  scan.ego.v = number(ego, "v");
  scan.ego.yaw_rate = number(ego, "yaw_rate");
  if (ego.contains("sensors")) {
    for (const Json& s : array(ego, "sensors")) {
      scan.ego.sensors.push_back({number(s, "x"), number(s, "y"), number(s, "boresight")});
    }
  }
  for (const Json& d : array(j, "detections")) {
    Detection det;
    det.id = integer(d, "id");
    det.x = number(d, "x");
    det.y = number(d, "y");
    det.vr = number(d, "vr");
    det.noise = matrix_from(d, "R", 3, 3);
    scan.detections.push_back(det);
  }
  return scan;
}

void validate(const Recording& rec) {
  for (std::size_t i = 0; i < rec.scans.size(); ++i) {
    const RadarScan& s = rec.scans[i];
    if (s.k != static_cast<std::int64_t>(i)) {
      throw ValidationError("scan indices must be contiguous from 0; found " + std::to_string(s.k) +
                            " at position " + std::to_string(i));
    }
    if (i > 0 && !(s.t > rec.scans[i - 1].t)) {
      throw ValidationError("scan " + std::to_string(s.k) + " timestamp is not strictly increasing");
    }
    if (!(s.ego.yaw > -std::numbers::pi && s.ego.yaw <= std::numbers::pi)) {
      throw ValidationError("scan " + std::to_string(s.k) + " ego yaw outside (-pi, pi]");
    }
    std::set<DetId> ids;
    for (const Detection& d : s.detections) {
      if (!ids.insert(d.id).second) {
        throw ValidationError("scan " + std::to_string(s.k) + " repeats detection id " +
                              std::to_string(d.id));
      }
      if (!std::isfinite(d.x) || !std::isfinite(d.y) || !std::isfinite(d.vr)) {
        throw ValidationError("detection " + std::to_string(d.id) + " has non-finite coordinates");
      }
      try {
        require_spd(d.noise);
      } catch (const DegenerateMatrixError& e) {
        throw ValidationError("detection " + std::to_string(d.id) + " noise: " + e.what());
      }
    }
  }
}

void write_recording(const Recording& rec, std::ostream& os) {
  os << Json{{"meta", {{"id", rec.meta.id},
                       {"sensor_count", rec.meta.sensor_count},
                       {"scan_rate_hz", rec.meta.scan_rate_hz},
                       {"frame", "world"}}}}
            .dump()
     << '\n';
  for (const auto& s : rec.scans) os << encode(s).dump() << '\n';
}

Recording read_recording(std::istream& is) {
  Recording rec;
  bool ego_frame = false;
  std::size_t scan_lines = 0;
  for_each_line(is, [&](const Json& j, std::size_t line) {
    if (j.contains("meta")) {
      if (scan_lines > 0) throw ParseError("metadata must precede scan records", line);
      const Json& m = j["meta"];
      rec.meta.id = text(m, "id");
      rec.meta.sensor_count = static_cast<int>(integer(m, "sensor_count"));
      rec.meta.scan_rate_hz = number(m, "scan_rate_hz");
      const std::string frame = m.contains("frame") ? text(m, "frame") : "world";
      if (frame != "world" && frame != "ego") throw ValidationError("frame must be 'world' or 'ego'");
      ego_frame = frame == "ego";
      return;
    }
    RadarScan scan = decode_scan(j);
    for (auto& d : scan.detections) {
      d.noise = symmetrize_checked(d.noise);
    }
    if (!rec.scans.empty() && !(scan.t > rec.scans.back().t)) {
      throw ParseError("scan timestamps must be strictly increasing", line);
    }
    if (scan.k != static_cast<std::int64_t>(rec.scans.size())) {
      throw ParseError("scan indices must be contiguous from 0", line);
    }
    ++scan_lines;
    rec.scans.push_back(std::move(scan));
  });
  if (ego_frame) {
    for (auto& scan : rec.scans) {
      const Mat2 rot = rotation(scan.ego.yaw);
      for (auto& d : scan.detections) {
        const Vec2 p = scan.ego.position() + rot * d.position();
        d.x = p.x();
        d.y = p.y();
        d.noise.topLeftCorner<2, 2>() = rot * d.noise.topLeftCorner<2, 2>() * rot.transpose();
        d.noise.block<2, 1>(0, 2) = rot * d.noise.block<2, 1>(0, 2);
        d.noise.block<1, 2>(2, 0) = d.noise.block<2, 1>(0, 2).transpose();
      }
    }
  }
  validate(rec);
  return rec;
}

void save_recording(const Recording& rec, const std::filesystem::path& path) {
  save_with(path, [&](std::ostream& os) { write_recording(rec, os); });
}

Recording load_recording(const std::filesystem::path& path) {
  std::ifstream is = open_input(path);
  return read_recording(is);
}

// --- labels --------------------------------------------------------------

Json encode(const ScanLabels& labels, const ManualLabelSet& set) {
  Json list = Json::array();
  std::set<ObjectId> objects;
  for (const auto& [det, obj] : labels.labels) {
    list.push_back({{"id", det}, {"obj", obj}});
    objects.insert(obj);
  }
  Json classes = Json::object();
  for (ObjectId obj : objects) {
    if (auto it = set.classes.find(obj); it != set.classes.end()) {
      classes[std::to_string(obj)] = std::string(to_string(it->second));
    }
  }
  return Json{{"k", labels.k}, {"labels", std::move(list)}, {"classes", std::move(classes)}};
}

void write_labels(const ManualLabelSet& labels, std::ostream& os) {
  for (const auto& s : labels.scans) os << encode(s, labels).dump() << '\n';
}

ManualLabelSet read_labels(std::istream& is) {
  ManualLabelSet out;
  for_each_line(is, [&](const Json& j, std::size_t line) {
    ScanLabels sl;
    sl.k = integer(j, "k");
    if (!out.scans.empty() && sl.k <= out.scans.back().k) {
      throw ParseError("label records must have increasing scan indices", line);
    }
    for (const Json& l : array(j, "labels")) {
      const DetId det = integer(l, "id");
      const ObjectId obj = integer(l, "obj");
      if (!sl.labels.emplace(det, obj).second) {
        throw ParseError("detection " + std::to_string(det) + " labeled twice in scan " +
                             std::to_string(sl.k),
                         line);
      }
    }
    if (j.contains("classes")) {
      for (const auto& [key, value] : field(j, "classes").items()) {
        ObjectId obj = 0;
        try {
          obj = std::stoll(key);
        } catch (const std::exception&) {
          throw ParseError("class map key '" + key + "' is not an object id", line);
        }
        if (!value.is_string()) throw ParseError("class names must be strings", line);
        const ObjectClass cls = object_class_from_string(value.get<std::string>());
        auto [it, inserted] = out.classes.emplace(obj, cls);
        if (!inserted && it->second != cls) {
          throw ParseError("object " + key + " has conflicting classes", line);
        }
      }
    }
    out.scans.push_back(std::move(sl));
  });
  return out;
}

void save_labels(const ManualLabelSet& labels, const std::filesystem::path& path) {
  save_with(path, [&](std::ostream& os) { write_labels(labels, os); });
}

ManualLabelSet load_labels(const std::filesystem::path& path) {
  std::ifstream is = open_input(path);
  return read_labels(is);
}

std::vector<std::string> cross_validate(const ManualLabelSet& labels, const Recording& rec) {
  std::vector<std::string> warnings;
  for (const auto& sl : labels.scans) {
    if (sl.k < 0 || static_cast<std::size_t>(sl.k) >= rec.scans.size()) {
      warnings.push_back("labels for scan " + std::to_string(sl.k) + " which is not in the recording");
      continue;
    }
    const RadarScan& scan = rec.scans[static_cast<std::size_t>(sl.k)];
    for (const auto& [det, obj] : sl.labels) {
      if (scan.find(det) == nullptr) {
        warnings.push_back("scan " + std::to_string(sl.k) + ": label for unknown detection " +
                           std::to_string(det));
      }
    }
  }
  return warnings;
}

// --- trajectories --------------------------------------------------------

Json encode(const ObjectTrajectory& traj) {
  Json states = Json::array();
  for (const auto& s : traj.states) {
    states.push_back({{"k", s.k},
                      {"x", matrix_json(s.x.transpose())},
                      {"P", matrix_json(s.P)},
                      {"alpha", s.alpha},
                      {"X", matrix_json(s.X)},
                      {"n_assoc", s.n_assoc}});
  }
  Json out{{"object_id", traj.object_id},
           {"class", std::string(to_string(traj.object_class))},
           {"k_start", traj.k_start},
           {"k_end", traj.k_end}};
  out["length"] = traj.length ? Json(*traj.length) : Json(nullptr);
  out["width"] = traj.width ? Json(*traj.width) : Json(nullptr);
  out["source_track_ids"] = traj.source_track_ids;
  out["states"] = std::move(states);
  return out;
}

ObjectTrajectory decode_trajectory(const Json& j) {
  ObjectTrajectory t;
  t.object_id = integer(j, "object_id");
  t.object_class = object_class_from_string(text(j, "class"));
  t.k_start = integer(j, "k_start");
  t.k_end = integer(j, "k_end");
  if (t.k_start > t.k_end) throw ValidationError("trajectory k_start exceeds k_end");
  if (!field(j, "length").is_null()) t.length = number(j, "length");
  if (!field(j, "width").is_null()) t.width = number(j, "width");
  for (const Json& id : array(j, "source_track_ids")) t.source_track_ids.push_back(id.get<TrackId>());
  for (const Json& s : array(j, "states")) {
    TrajectoryState st;
    st.k = integer(s, "k");
    st.x = matrix_from(s, "x", 1, 4).transpose();
    st.P = matrix_from(s, "P", 4, 4);
    st.alpha = number(s, "alpha");
    st.X = matrix_from(s, "X", 2, 2);
    st.n_assoc = static_cast<int>(integer(s, "n_assoc"));
    if (!t.states.empty() && st.k <= t.states.back().k) {
      throw ValidationError("trajectory states must have increasing scan indices");
    }
    t.states.push_back(st);
  }
  return t;
}

void write_trajectories(const std::vector<ObjectTrajectory>& trajs, std::ostream& os) {
  for (const auto& t : trajs) os << encode(t).dump() << '\n';
}

std::vector<ObjectTrajectory> read_trajectories(std::istream& is) {
  std::vector<ObjectTrajectory> out;
  for_each_line(is, [&](const Json& j, std::size_t) { out.push_back(decode_trajectory(j)); });
  return out;
}

void save_trajectories(const std::vector<ObjectTrajectory>& trajs, const std::filesystem::path& path) {
  save_with(path, [&](std::ostream& os) { write_trajectories(trajs, os); });
}

std::vector<ObjectTrajectory> load_trajectories(const std::filesystem::path& path) {
  std::ifstream is = open_input(path);
  return read_trajectories(is);
}

// --- annotations ---------------------------------------------------------

Json encode(const AnnotationRecord& r) {
  return Json{{"k", r.k},          {"det_id", r.det_id},
              {"object_id", r.object_id}, {"rho", r.rho},
              {"region", std::string(to_string(r.region))}, {"d2", r.d2}};
}

AnnotationRecord decode_annotation(const Json& j) {
  AnnotationRecord r;
  r.k = integer(j, "k");
  r.det_id = integer(j, "det_id");
  r.object_id = integer(j, "object_id");
  r.rho = number(j, "rho");
  r.region = region_from_string(text(j, "region"));
  r.d2 = j.contains("d2") ? number(j, "d2") : 0.0;
  if (!(r.rho > 0.0 && r.rho <= 1.0)) throw ValidationError("annotation weight must lie in (0, 1]");
  if (r.region == Region::Core && r.rho != 1.0) {
    throw ValidationError("core annotations must carry weight 1");
  }
  return r;
}

void write_annotations(const std::vector<AnnotationRecord>& records, std::ostream& os) {
  for (const auto& r : records) os << encode(r).dump() << '\n';
}

std::vector<AnnotationRecord> read_annotations(std::istream& is) {
  std::vector<AnnotationRecord> out;
  for_each_line(is, [&](const Json& j, std::size_t) { out.push_back(decode_annotation(j)); });
  return out;
}

void save_annotations(const std::vector<AnnotationRecord>& records, const std::filesystem::path& path) {
  save_with(path, [&](std::ostream& os) { write_annotations(records, os); });
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path) {
  std::ifstream is = open_input(path);
  return read_annotations(is);
}

Json encode(const BorderFn& fn) {
  return Json{{"form", fn.form == BorderFn::Form::Constant ? "constant" : "linear"},
              {"params", fn.params}};
}

BorderFn decode_border(const Json& j) {
  BorderFn fn;
  const std::string form = text(j, "form");
  if (form == "constant") fn.form = BorderFn::Form::Constant;
  else if (form == "linear") fn.form = BorderFn::Form::Linear;
  else throw ValidationError("unknown border form '" + form + "'");
  fn.params.clear();
  for (const Json& p : array(j, "params")) {
    if (!p.is_number()) throw ValidationError("border parameters must be numbers");
    fn.params.push_back(p.get<double>());
  }
  fn.validate();
  return fn;
}

void write_annotation_summary(const AnnotationSet& set, std::size_t scan_count, std::ostream& os) {
  os << Json{{"config",
              {{"alpha", set.config.alpha},
               {"extent_scale", set.config.extent_scale},
               {"border", encode(set.config.border)}}}}
            .dump()
     << '\n';
  std::vector<std::array<long, 2>> counts(scan_count, {0, 0});
  for (const auto& r : set.records) {
    if (r.k < 0 || static_cast<std::size_t>(r.k) >= scan_count) continue;
    ++counts[static_cast<std::size_t>(r.k)][r.region == Region::Core ? 0 : 1];
  }
  for (std::size_t k = 0; k < scan_count; ++k) {
    os << Json{{"k", k},
               {"records", counts[k][0] + counts[k][1]},
               {"core", counts[k][0]},
               {"border", counts[k][1]}}
              .dump()
       << '\n';
  }
}

// --- hypotheses ----------------------------------------------------------

Json encode(const TrackSnapshot& s, TrackId id) {
  Json models = Json::array();
  for (const auto& m : s.state.models) {
    models.push_back({{"x", matrix_json(m.x.transpose())}, {"P", matrix_json(m.P)}});
  }
  Json mu = Json::array();
  for (Eigen::Index i = 0; i < s.state.mu.size(); ++i) mu.push_back(s.state.mu(i));
  return Json{{"track_id", id},
              {"k", s.k},
              {"status", std::string(to_string(s.status))},
              {"n_assoc", s.n_assoc},
              {"mu", std::move(mu)},
              {"models", std::move(models)},
              {"X", matrix_json(s.extent.X)},
              {"nu", s.extent.nu}};
}

void write_history(const HypothesisSet& hyps, std::ostream& os) {
  for (const auto& rec : hyps.tracks) {
    for (std::size_t i = 0; i < rec.history.size(); ++i) {
      Json j = encode(rec.history[i], rec.track_id);
      if (rec.failed && i + 1 == rec.history.size()) j["failure"] = rec.failure;
      os << j.dump() << '\n';
    }
  }
}

Json encode(const ScanAssociation& a) {
  Json assigned = Json::object();
  for (const auto& [id, dets] : a.assigned) assigned[std::to_string(id)] = dets;
  return Json{{"k", a.k}, {"assigned", std::move(assigned)}, {"leftover", a.leftover}, {"born", a.born}};
}

ScanAssociation decode_association(const Json& j) {
  ScanAssociation a;
  a.k = integer(j, "k");
  for (const auto& [key, dets] : field(j, "assigned").items()) {
    a.assigned[std::stoll(key)] = dets.get<std::vector<DetId>>();
  }
  a.leftover = array(j, "leftover").get<std::vector<std::vector<DetId>>>();
  a.born = array(j, "born").get<std::vector<TrackId>>();
  if (a.born.size() != a.leftover.size()) {
    throw ValidationError("association 'born' must parallel 'leftover'");
  }
  return a;
}

void write_associations(const HypothesisSet& hyps, std::ostream& os) {
  for (const auto& a : hyps.associations) os << encode(a).dump() << '\n';
}

HypothesisSet read_hypotheses(std::istream& history, std::istream& associations) {
  HypothesisSet out;
  std::map<TrackId, TrackRecord> tracks;
  for_each_line(history, [&](const Json& j, std::size_t) {
    const TrackId id = integer(j, "track_id");
    TrackSnapshot s;
    s.k = integer(j, "k");
    s.status = track_status_from_string(text(j, "status"));
    s.n_assoc = static_cast<int>(integer(j, "n_assoc"));
    const Json& mu = array(j, "mu");
    s.state.mu.resize(static_cast<Eigen::Index>(mu.size()));
    for (std::size_t i = 0; i < mu.size(); ++i) s.state.mu(static_cast<Eigen::Index>(i)) = mu[i].get<double>();
    for (const Json& m : array(j, "models")) {
      ModelEstimate est;
      est.x = matrix_from(m, "x", 1, kStateDim).transpose();
      est.P = matrix_from(m, "P", kStateDim, kStateDim);
      s.state.models.push_back(est);
    }
    if (s.state.models.size() != mu.size()) throw ValidationError("one probability per model required");
    s.extent.X = matrix_from(j, "X", 2, 2);
    s.extent.nu = number(j, "nu");
    TrackRecord& rec = tracks[id];
    rec.track_id = id;
    if (!rec.history.empty() && s.k <= rec.history.back().k) {
      throw ValidationError("track history must have increasing scan indices");
    }
    rec.history.push_back(std::move(s));
    if (j.contains("failure")) {
      rec.failed = true;
      rec.failure = text(j, "failure");
    }
  });
  for (auto& [id, rec] : tracks) out.tracks.push_back(std::move(rec));
  for_each_line(associations, [&](const Json& j, std::size_t) {
    ScanAssociation a = decode_association(j);
    if (a.k != static_cast<std::int64_t>(out.associations.size())) {
      throw ValidationError("association records must be contiguous from scan 0");
    }
    out.associations.push_back(std::move(a));
  });
  return out;
}

void save_hypotheses(const HypothesisSet& hyps, const std::filesystem::path& history,
                     const std::filesystem::path& associations) {
  save_with(history, [&](std::ostream& os) { write_history(hyps, os); });
  save_with(associations, [&](std::ostream& os) { write_associations(hyps, os); });
}

HypothesisSet load_hypotheses(const std::filesystem::path& history,
                              const std::filesystem::path& associations) {
  std::ifstream h = open_input(history);
  std::ifstream a = open_input(associations);
  return read_hypotheses(h, a);
}

// --- supervision ---------------------------------------------------------

Json encode(const SizeBounds& b) {
  return Json{{"min_length", b.min_length},
              {"max_length", b.max_length},
              {"min_width", b.min_width},
              {"max_width", b.max_width}};
}

SizeBounds decode_size_bounds(const Json& j) {
  return {number(j, "min_length"), number(j, "max_length"), number(j, "min_width"),
          number(j, "max_width")};
}

Json encode(const SupervisionDecision& d) {
  Json classes = Json::object();
  for (const auto& [id, c] : d.classes) classes[std::to_string(id)] = std::string(to_string(c));
  Json overrides = Json::object();
  for (const auto& [id, b] : d.size_overrides) overrides[std::to_string(id)] = encode(b);
  return Json{{"accepted", d.accepted},
              {"merge_groups", d.merge_groups},
              {"classes", std::move(classes)},
              {"size_overrides", std::move(overrides)}};
}

SupervisionDecision decode_decision(const Json& j) {
  SupervisionDecision d;
  try {
    d.accepted = array(j, "accepted").get<std::vector<TrackId>>();
    d.merge_groups = j.contains("merge_groups")
                         ? array(j, "merge_groups").get<std::vector<std::vector<TrackId>>>()
                         : std::vector<std::vector<TrackId>>{};
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("decision track ids must be integers: ") + e.what());
  }
  if (j.contains("classes")) {
    for (const auto& [key, value] : field(j, "classes").items()) {
      if (!value.is_string()) throw ValidationError("class names must be strings");
      try {
        d.classes[std::stoll(key)] = object_class_from_string(value.get<std::string>());
      } catch (const std::invalid_argument&) {
        throw ValidationError("class key '" + key + "' is not a track id");
      }
    }
  }
  if (j.contains("size_overrides")) {
    for (const auto& [key, value] : field(j, "size_overrides").items()) {
      try {
        d.size_overrides[std::stoll(key)] = decode_size_bounds(value);
      } catch (const std::invalid_argument&) {
        throw ValidationError("size override key '" + key + "' is not a track id");
      }
    }
  }
  return d;
}

SupervisionDecision load_decision(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw ParseError(e.what(), 1);
  }
  return decode_decision(j);
}

void save_decision(const SupervisionDecision& d, const std::filesystem::path& path) {
  write_file_atomic(path, encode(d).dump(2) + "\n");
}

Json ellipse_json(const Vec2& center, const Mat2& X) {
  const EllipseAxes axes = ellipse_axes(X);
  return Json{{"cx", center.x()},
              {"cy", center.y()},
              {"semi_major", 0.5 * axes.length},
              {"semi_minor", 0.5 * axes.width},
              {"angle", axes.angle}};
}

}  // namespace baas
