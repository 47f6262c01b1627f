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


#include "baas/synth.hpp"

#include "baas/error.hpp"
#include "baas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace baas {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Noise floor keeping R positive definite for noiseless configurations.
constexpr double kMinSigma = 1e-3;

Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

ObjectKinematics along_segments(const ObjectScript& s, double tau) {
  Vec2 p = s.start;
  double theta = s.heading;
  double speed = s.segments.empty() ? s.speed : 0.0;
  double remaining = std::max(tau, 0.0);
  for (const MotionSegment& seg : s.segments) {
    speed = seg.speed;
    const double dt = std::min(remaining, seg.duration);
    const double w = seg.turn_rate;
    if (std::abs(w) < 1e-12) {
      p += speed * dt * unit(theta);
    } else {
      p += (speed / w) * Vec2(std::sin(theta + w * dt) - std::sin(theta),
                              std::cos(theta) - std::cos(theta + w * dt));
      theta += w * dt;
    }
    remaining -= dt;
    if (remaining <= 0.0) return {p, speed * unit(theta), wrap_angle(theta)};
  }
  p += speed * remaining * unit(theta);
  return {p, speed * unit(theta), wrap_angle(theta)};
}

ObjectKinematics along_waypoints(const ObjectScript& s, double tau) {
  if (s.waypoints.size() == 1 || s.speed == 0.0) {
    return {s.waypoints.front(), Vec2::Zero(), wrap_angle(s.heading)};
  }
  double dist = s.speed * std::max(tau, 0.0);
  for (std::size_t i = 0; i + 1 < s.waypoints.size(); ++i) {
    const Vec2 d = s.waypoints[i + 1] - s.waypoints[i];
    const double len = d.norm();
    if (len == 0.0) continue;
    const bool last = i + 2 == s.waypoints.size();
    if (dist <= len || last) {
      const Vec2 u = d / len;
      return {s.waypoints[i] + dist * u, s.speed * u, std::atan2(u.y(), u.x())};
    }
    dist -= len;
  }
  return {s.waypoints.back(), Vec2::Zero(), wrap_angle(s.heading)};
}

EgoPose ego_at(const SynthConfig& cfg, double t) {
  EgoPose ego;
  ego.v = cfg.ego_v;
  ego.yaw_rate = cfg.ego_yaw_rate;
  const double w = cfg.ego_yaw_rate;
  if (std::abs(w) < 1e-12) {
    ego.x = cfg.ego_v * t;
  } else {
    ego.x = cfg.ego_v / w * std::sin(w * t);
    ego.y = cfg.ego_v / w * (1.0 - std::cos(w * t));
  }
  ego.yaw = wrap_angle(w * t);
  for (const auto& s : cfg.sensors) ego.sensors.push_back(s.mount);
  return ego;
}

bool alive(const ObjectScript& s, double t) { return t >= s.birth && t <= s.death; }

std::size_t scan_count(const SynthConfig& cfg) {
  return static_cast<std::size_t>(std::llround(cfg.duration * cfg.scan_rate_hz));
}

}  // namespace

std::map<ObjectClass, double> SynthConfig::default_lambda() {
  return {{ObjectClass::Pedestrian, 2.0}, {ObjectClass::PedestrianGroup, 4.0},
          {ObjectClass::Cyclist, 3.0},    {ObjectClass::Car, 6.0},
          {ObjectClass::Truck, 10.0},     {ObjectClass::Other, 3.0}};
}

void SynthConfig::validate() const {
  if (!(duration > 0.0)) throw ValidationError("duration must be positive");
  if (!(scan_rate_hz > 0.0)) throw ValidationError("scan rate must be positive");
  if (sigma_pos < 0.0 || sigma_vr < 0.0) throw ValidationError("noise levels must be non-negative");
  if (clutter_rate < 0.0) throw ValidationError("clutter rate must be non-negative");
  if (sensors.empty()) throw ValidationError("at least one sensor sector is required");
  for (const auto& s : sensors) {
    if (!(s.fov > 0.0) || !(s.max_range > 0.0)) {
      throw ValidationError("sensor sectors need a positive opening angle and range");
    }
  }
  for (const auto& [cls, rate] : lambda) {
    if (rate < 0.0) throw ValidationError("detection rates must be non-negative");
  }
  std::set<ObjectId> ids;
  for (const auto& o : objects) {
    if (o.id < 0) throw ValidationError("object ids must be non-negative");
    if (!ids.insert(o.id).second) throw ValidationError("duplicate object id " + std::to_string(o.id));
    if (o.waypoints.empty() && o.segments.empty() && o.speed != 0.0) {
      throw ValidationError("object " + std::to_string(o.id) + " needs waypoints or segments");
    }
    if (!(o.length > 0.0) || !(o.width > 0.0)) {
      throw ValidationError("object " + std::to_string(o.id) + " needs a positive size");
    }
    if (o.lambda && *o.lambda < 0.0) throw ValidationError("detection rates must be non-negative");
    if (o.death < o.birth) throw ValidationError("object " + std::to_string(o.id) + " dies before birth");
  }
}

ObjectKinematics object_at(const ObjectScript& script, double t) {
  const double tau = t - script.birth;
  if (!script.waypoints.empty()) return along_waypoints(script, tau);
  return along_segments(script, tau);
}

bool in_field_of_view(const EgoPose& ego, std::span<const SensorSector> sensors, const Vec2& p) {
  for (const auto& s : sensors) {
    const Vec2 d = p - sensor_position(ego, s.mount);
    if (d.norm() > s.max_range) continue;
    if (s.fov >= kTwoPi - 1e-12) return true;
    const double bearing = wrap_angle(std::atan2(d.y(), d.x()) - ego.yaw - s.mount.boresight);
    if (std::abs(bearing) <= 0.5 * s.fov) return true;
  }
  return false;
}

Scenario generate_scenario(const SynthConfig& cfg) {
  cfg.validate();
  const std::size_t n = scan_count(cfg);
  for (const auto& o : cfg.objects) {
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) / cfg.scan_rate_hz;
      if (!alive(o, t)) continue;
      const Vec2 p = object_at(o, t).position;
      if (p.x() < cfg.bounds.min_x || p.x() > cfg.bounds.max_x || p.y() < cfg.bounds.min_y ||
          p.y() > cfg.bounds.max_y) {
        throw ValidationError("object " + std::to_string(o.id) + " leaves the world bounds at t=" +
                              std::to_string(t));
      }
    }
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::map<ObjectClass, double> rates =
      cfg.lambda.empty() ? SynthConfig::default_lambda() : cfg.lambda;

  Mat3 R = Mat3::Zero();
  R(0, 0) = R(1, 1) = std::pow(std::max(cfg.sigma_pos, kMinSigma), 2);
  R(2, 2) = std::pow(std::max(cfg.sigma_vr, kMinSigma), 2);

  Scenario out;
  out.recording.meta = {cfg.recording_id, static_cast<int>(cfg.sensors.size()), cfg.scan_rate_hz};
  std::map<ObjectId, ObjectTrajectory> truth;
  double sector_weight_total = 0.0;
  for (const auto& s : cfg.sensors) sector_weight_total += s.fov * s.max_range * s.max_range;

  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / cfg.scan_rate_hz;
    RadarScan scan;
    scan.k = static_cast<std::int64_t>(k);
    scan.t = t;
    scan.ego = ego_at(cfg, t);
    std::vector<std::pair<Detection, ObjectId>> dets;

    auto noisy = [&](const Vec2& p, double vr) {
      Detection d;
      d.x = p.x() + (cfg.sigma_pos > 0.0 ? cfg.sigma_pos * normal(rng) : 0.0);
      d.y = p.y() + (cfg.sigma_pos > 0.0 ? cfg.sigma_pos * normal(rng) : 0.0);
      d.vr = vr + (cfg.sigma_vr > 0.0 ? cfg.sigma_vr * normal(rng) : 0.0);
      d.noise = R;
      return d;
    };

    for (const auto& o : cfg.objects) {
      if (!alive(o, t)) continue;
      const ObjectKinematics kin = object_at(o, t);
      if (!in_field_of_view(scan.ego, cfg.sensors, kin.position)) continue;
      double lambda = o.lambda ? *o.lambda : 0.0;
      if (!o.lambda) {
        auto it = rates.find(o.object_class);
        lambda = it == rates.end() ? 0.0 : it->second;
      }
      int count = 0;
      if (lambda > 0.0) {
        const int draws = std::poisson_distribution<int>(lambda)(rng);
        const Mat2 rot = rotation(kin.heading);
        for (int i = 0; i < draws; ++i) {
          const double r = std::sqrt(uniform(rng));
          const double phi = kTwoPi * uniform(rng);
          const Vec2 local(0.5 * o.length * r * std::cos(phi), 0.5 * o.width * r * std::sin(phi));
          const Vec2 p = kin.position + rot * local;
          const double vr = los_range_rate(scan.ego, p, kin.velocity);
          Detection d = noisy(p, vr);
          if (!in_field_of_view(scan.ego, cfg.sensors, d.position())) continue;
          dets.emplace_back(d, o.id);
          ++count;
        }
      }
      ObjectTrajectory& traj = truth[o.id];
      if (traj.states.empty()) {
        traj.object_id = o.id;
        traj.object_class = o.object_class;
        traj.k_start = scan.k;
        if (!keeps_per_scan_extent(o.object_class)) {
          traj.length = o.length;
          traj.width = o.width;
        }
      }
      traj.k_end = scan.k;
      TrajectoryState st;
      st.k = scan.k;
      st.x << kin.position, kin.velocity;
      st.P = Mat4::Zero();
      st.alpha = kin.heading;
      st.X = extent_matrix(o.length, o.width, kin.heading);
      st.n_assoc = count;
      traj.states.push_back(st);
    }

    if (cfg.clutter_rate > 0.0) {
      const int draws = std::poisson_distribution<int>(cfg.clutter_rate)(rng);
      for (int i = 0; i < draws; ++i) {
        double pick = uniform(rng) * sector_weight_total;
        const SensorSector* sector = &cfg.sensors.back();
        for (const auto& s : cfg.sensors) {
          pick -= s.fov * s.max_range * s.max_range;
          if (pick <= 0.0) {
            sector = &s;
            break;
          }
        }
        const double r = sector->max_range * std::sqrt(uniform(rng));
        const double a = scan.ego.yaw + sector->mount.boresight + (uniform(rng) - 0.5) * sector->fov;
        const Vec2 p = sensor_position(scan.ego, sector->mount) + r * unit(a);
        dets.emplace_back(noisy(p, los_range_rate(scan.ego, p, Vec2::Zero())), kClutterObject);
      }
    }

    std::shuffle(dets.begin(), dets.end(), rng);
    ScanLabels labels;
    labels.k = scan.k;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      dets[i].first.id = static_cast<DetId>(i);
      scan.detections.push_back(dets[i].first);
      labels.labels.emplace(dets[i].first.id, dets[i].second);
    }
    out.recording.scans.push_back(std::move(scan));
    out.labels.scans.push_back(std::move(labels));
  }

  for (const auto& o : cfg.objects) out.labels.classes[o.id] = o.object_class;
  for (auto& [id, traj] : truth) out.truth.push_back(std::move(traj));
  return out;
}

SynthConfig random_scenario(std::uint64_t seed, int objects, double clutter_rate, double duration) {
  if (objects < 0 || objects > 8) throw ValidationError("random scenarios hold 0 to 8 objects");
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.duration = duration;
  cfg.clutter_rate = clutter_rate;
  cfg.ego_v = 2.0;
  cfg.sensors = {SensorSector{{0.0, 0.0, 0.0}, kTwoPi, 120.0}};
  cfg.recording_id = "random-" + std::to_string(seed);

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto u = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  std::vector<int> lanes(8);
  for (int i = 0; i < 8; ++i) lanes[static_cast<std::size_t>(i)] = i;
  std::shuffle(lanes.begin(), lanes.end(), rng);

  struct Kind {
    ObjectClass cls;
    double length, width, vmin, vmax;
  };
  const Kind kinds[] = {{ObjectClass::Pedestrian, 0.6, 0.6, 1.0, 2.0},
                        {ObjectClass::Cyclist, 1.8, 0.6, 3.0, 6.0},
                        {ObjectClass::Car, 4.5, 1.8, 5.0, 12.0},
                        {ObjectClass::Truck, 10.0, 2.5, 5.0, 10.0}};

  for (int i = 0; i < objects; ++i) {
    const Kind& kind = kinds[std::uniform_int_distribution<int>(0, 3)(rng)];
    ObjectScript o;
    o.id = i;
    o.object_class = kind.cls;
    o.length = kind.length;
    o.width = kind.width;
    const double lane_y = -28.0 + 8.0 * lanes[static_cast<std::size_t>(i)] + u(-1.0, 1.0);
    const bool forward = u(0.0, 1.0) < 0.5;
    const double speed = u(kind.vmin, kind.vmax);
    const double travel = speed * duration;
    const double x0 = u(-0.5 * travel, 0.0) - 10.0;
    o.start = forward ? Vec2(x0, lane_y) : Vec2(-x0, lane_y);
    o.heading = forward ? 0.0 : std::numbers::pi;
    o.birth = u(0.0, 0.3 * duration);
    o.death = o.birth + u(0.5, 1.0) * (duration - o.birth);
    double left = duration;
    while (left > 0.0) {
      MotionSegment seg;
      seg.duration = std::min(left, u(2.5, 4.0));
      seg.speed = speed;
      seg.turn_rate = u(-0.02, 0.02);
      o.segments.push_back(seg);
      left -= seg.duration;
    }
    cfg.objects.push_back(o);
  }
  return cfg;
}

SynthConfig turning_car_scenario(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.duration = 10.0;
  cfg.clutter_rate = 5.0;
  cfg.sensors = {SensorSector{{0.0, 0.0, 0.0}, kTwoPi, 100.0}};
  cfg.recording_id = "turning-car-" + std::to_string(seed);
  ObjectScript car;
  car.id = 0;
  car.object_class = ObjectClass::Car;
  car.length = 4.6;
  car.width = 1.9;
  car.start = {-30.0, 15.0};
  car.heading = 0.0;
  car.segments = {{3.0, 8.0, 0.0}, {3.0, 8.0, 0.5 * std::numbers::pi / 3.0}, {4.0, 8.0, 0.0}};
  cfg.objects.push_back(car);
  return cfg;
}

Json encode(const SynthConfig& cfg) {
  Json objects = Json::array();
  for (const auto& o : cfg.objects) {
    Json j{{"id", o.id},
           {"class", std::string(to_string(o.object_class))},
           {"birth", o.birth},
           {"death", o.death},
           {"length", o.length},
           {"width", o.width}};
    if (o.lambda) j["lambda"] = *o.lambda;
    if (!o.waypoints.empty()) {
      Json w = Json::array();
      for (const auto& p : o.waypoints) w.push_back({p.x(), p.y()});
      j["waypoints"] = std::move(w);
      j["speed"] = o.speed;
    } else {
      j["start"] = {o.start.x(), o.start.y()};
      j["heading"] = o.heading;
      Json segs = Json::array();
      for (const auto& s : o.segments) {
        segs.push_back({{"duration", s.duration}, {"speed", s.speed}, {"turn_rate", s.turn_rate}});
      }
      j["segments"] = std::move(segs);
    }
    objects.push_back(std::move(j));
  }
  Json lambda = Json::object();
  for (const auto& [cls, rate] : cfg.lambda) lambda[std::string(to_string(cls))] = rate;
  Json sensors = Json::array();
  for (const auto& s : cfg.sensors) {
    sensors.push_back({{"x", s.mount.x},
                       {"y", s.mount.y},
                       {"boresight", s.mount.boresight},
                       {"fov", s.fov},
                       {"max_range", s.max_range}});
  }
  return Json{{"seed", cfg.seed},
              {"duration", cfg.duration},
              {"scan_rate_hz", cfg.scan_rate_hz},
              {"recording_id", cfg.recording_id},
              {"sigma_pos", cfg.sigma_pos},
              {"sigma_vr", cfg.sigma_vr},
              {"clutter_rate", cfg.clutter_rate},
              {"ego", {{"v", cfg.ego_v}, {"yaw_rate", cfg.ego_yaw_rate}}},
              {"bounds",
               {{"min_x", cfg.bounds.min_x},
                {"max_x", cfg.bounds.max_x},
                {"min_y", cfg.bounds.min_y},
                {"max_y", cfg.bounds.max_y}}},
              {"sensors", std::move(sensors)},
              {"lambda", std::move(lambda)},
              {"objects", std::move(objects)}};
}

SynthConfig decode_synth_config(const Json& j) {
  if (!j.is_object()) throw ValidationError("synthetic scenario config must be an object");
  SynthConfig cfg;
  try {
    cfg.seed = j.value("seed", cfg.seed);
    cfg.duration = j.value("duration", cfg.duration);
    cfg.scan_rate_hz = j.value("scan_rate_hz", cfg.scan_rate_hz);
    cfg.recording_id = j.value("recording_id", cfg.recording_id);
    cfg.sigma_pos = j.value("sigma_pos", cfg.sigma_pos);
    cfg.sigma_vr = j.value("sigma_vr", cfg.sigma_vr);
    cfg.clutter_rate = j.value("clutter_rate", cfg.clutter_rate);
    if (j.contains("ego")) {
      cfg.ego_v = j["ego"].value("v", cfg.ego_v);
      cfg.ego_yaw_rate = j["ego"].value("yaw_rate", cfg.ego_yaw_rate);
    }
    if (j.contains("bounds")) {
      const Json& b = j["bounds"];
      cfg.bounds = {b.value("min_x", cfg.bounds.min_x), b.value("max_x", cfg.bounds.max_x),
                    b.value("min_y", cfg.bounds.min_y), b.value("max_y", cfg.bounds.max_y)};
    }
    if (j.contains("sensors")) {
      cfg.sensors.clear();
      for (const Json& s : j["sensors"]) {
        cfg.sensors.push_back({{s.value("x", 0.0), s.value("y", 0.0), s.value("boresight", 0.0)},
                               s.value("fov", kTwoPi),
                               s.value("max_range", 100.0)});
      }
    }
    if (j.contains("lambda")) {
      for (const auto& [name, rate] : j["lambda"].items()) {
        cfg.lambda[object_class_from_string(name)] = rate.get<double>();
      }
    }
    if (j.contains("objects")) {
      for (const Json& oj : j["objects"]) {
        ObjectScript o;
        o.id = oj.at("id").get<ObjectId>();
        o.object_class = object_class_from_string(oj.at("class").get<std::string>());
        o.birth = oj.value("birth", o.birth);
        o.death = oj.value("death", o.death);
        o.length = oj.value("length", o.length);
        o.width = oj.value("width", o.width);
        if (oj.contains("lambda")) o.lambda = oj["lambda"].get<double>();
        if (oj.contains("waypoints")) {
          for (const Json& p : oj["waypoints"]) o.waypoints.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
          o.speed = oj.value("speed", 0.0);
        }
        if (oj.contains("start")) o.start = {oj["start"].at(0).get<double>(), oj["start"].at(1).get<double>()};
        o.heading = oj.value("heading", 0.0);
        if (oj.contains("segments")) {
          for (const Json& s : oj["segments"]) {
            o.segments.push_back({s.value("duration", 1.0), s.value("speed", 0.0), s.value("turn_rate", 0.0)});
          }
        }
        cfg.objects.push_back(std::move(o));
      }
    }
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("synthetic scenario config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace baas
