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

#include "baas/types.hpp"

#include "baas/error.hpp"

#include <algorithm>
#include <cmath>

namespace baas {

Vec2 EgoPose::velocity() const { return {v * std::cos(yaw), v * std::sin(yaw)}; }

const Detection* RadarScan::find(DetId id) const {
  for (const auto& d : detections) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

namespace {

constexpr std::array<std::pair<ObjectClass, std::string_view>, 6> kClassNames{{
    {ObjectClass::Pedestrian, "Pedestrian"},
    {ObjectClass::PedestrianGroup, "PedestrianGroup"},
    {ObjectClass::Cyclist, "Cyclist"},
    {ObjectClass::Car, "Car"},
    {ObjectClass::Truck, "Truck"},
    {ObjectClass::Other, "Other"},
}};

constexpr std::array<std::pair<TrackStatus, std::string_view>, 4> kStatusNames{{
    {TrackStatus::Initialized, "initialized"},
    {TrackStatus::Unconfident, "unconfident"},
    {TrackStatus::Verified, "verified"},
    {TrackStatus::Deleted, "deleted"},
}};

}  // namespace

std::string_view to_string(ObjectClass c) {
  for (const auto& [value, name] : kClassNames) {
    if (value == c) return name;
  }
  return "Other";
}

ObjectClass object_class_from_string(std::string_view name) {
  for (const auto& [value, n] : kClassNames) {
    if (n == name) return value;
  }
  throw ValidationError("unknown object class '" + std::string(name) + "'");
}

bool is_rigid(ObjectClass c) {
  return c == ObjectClass::Cyclist || c == ObjectClass::Car || c == ObjectClass::Truck;
}

bool keeps_per_scan_extent(ObjectClass c) {
  return c == ObjectClass::PedestrianGroup || c == ObjectClass::Other;
}

std::string_view to_string(TrackStatus s) {
  for (const auto& [value, name] : kStatusNames) {
    if (value == s) return name;
  }
  return "deleted";
}

TrackStatus track_status_from_string(std::string_view name) {
  for (const auto& [value, n] : kStatusNames) {
    if (n == name) return value;
  }
  throw ValidationError("unknown track status '" + std::string(name) + "'");
}

std::string_view to_string(Region r) { return r == Region::Core ? "core" : "border"; }

Region region_from_string(std::string_view name) {
  if (name == "core") return Region::Core;
  if (name == "border") return Region::Border;
  throw ValidationError("unknown annotation region '" + std::string(name) + "'");
}

ClassBounds ClassBounds::defaults() {
  ClassBounds b;
  b.sizes[ObjectClass::Pedestrian] = {0.3, 1.0, 0.3, 1.0};
  b.sizes[ObjectClass::Cyclist] = {1.2, 2.2, 0.3, 1.0};
  b.sizes[ObjectClass::Car] = {3.0, 5.5, 1.5, 2.2};
  b.sizes[ObjectClass::Truck] = {5.0, 20.0, 2.0, 3.0};
  b.eta_v = 1.0;
  return b;
}

void ClassBounds::validate() const {
  for (const auto& [c, s] : sizes) {
    if (!(s.min_length > 0.0 && s.min_length <= s.max_length && s.min_width > 0.0 &&
          s.min_width <= s.max_width)) {
      throw ValidationError("invalid size bounds for class " + std::string(to_string(c)));
    }
  }
  if (!(eta_v >= 0.0) || !std::isfinite(eta_v)) {
    throw ValidationError("speed threshold eta_v must be finite and non-negative");
  }
}

const RadarScan& Recording::scan(std::int64_t k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= scans.size()) {
    throw NotFoundError("scan " + std::to_string(k) + " not in recording");
  }
  return scans[static_cast<std::size_t>(k)];
}

std::size_t Recording::detection_count() const {
  std::size_t n = 0;
  for (const auto& s : scans) n += s.detections.size();
  return n;
}

const ScanLabels* ManualLabelSet::find(std::int64_t k) const {
  auto it = std::lower_bound(scans.begin(), scans.end(), k,
                             [](const ScanLabels& s, std::int64_t key) { return s.k < key; });
  if (it != scans.end() && it->k == k) return &*it;
  return nullptr;
}

const TrajectoryState* ObjectTrajectory::at(std::int64_t k) const {
  auto it = std::lower_bound(states.begin(), states.end(), k,
                             [](const TrajectoryState& s, std::int64_t key) { return s.k < key; });
  if (it != states.end() && it->k == k) return &*it;
  return nullptr;
}

}  // namespace baas
