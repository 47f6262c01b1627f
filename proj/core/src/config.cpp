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


#include "baas/config.hpp"

#include "baas/error.hpp"

#include <set>

namespace baas {

namespace {

void reject_unknown(const Json& j, std::initializer_list<const char*> known, const std::string& where) {
  std::set<std::string> names(known.begin(), known.end());
  for (const auto& [key, value] : j.items()) {
    if (!names.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j[key].get<T>();
}

std::string model_name(MotionModelKind k) {
  return k == MotionModelKind::ConstantVelocity ? "cv" : "ct";
}

MotionModelKind model_kind(const std::string& name) {
  if (name == "cv") return MotionModelKind::ConstantVelocity;
  if (name == "ct") return MotionModelKind::ConstantTurn;
  throw ValidationError("unknown motion model '" + name + "'");
}

Json encode(const TrackerConfig& t) {
  Json models = Json::array();
  for (const auto& m : t.imm.models) {
    models.push_back({{"kind", model_name(m.kind)}, {"accel_psd", m.accel_psd}, {"turn_psd", m.turn_psd}});
  }
  Json transition = Json::array();
  for (Eigen::Index r = 0; r < t.imm.transition.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < t.imm.transition.cols(); ++c) row.push_back(t.imm.transition(r, c));
    transition.push_back(std::move(row));
  }
  Json mu = Json::array();
  for (Eigen::Index i = 0; i < t.initial_mu.size(); ++i) mu.push_back(t.initial_mu(i));
  return Json{{"models", std::move(models)},
              {"transition", std::move(transition)},
              {"kappa", t.imm.kappa},
              {"initial_mu", std::move(mu)},
              {"extent_scale", t.extent_scale},
              {"rmm_tau", t.rmm_tau},
              {"initial_extent", t.initial_extent},
              {"initial_nu", t.initial_nu},
              {"min_extent_eig", t.min_extent_eig},
              {"max_extent_eig", t.max_extent_eig},
              {"init_tangential_sigma", t.init_tangential_sigma},
              {"init_turn_sigma", t.init_turn_sigma},
              {"cluster_radius", t.cluster_radius},
              {"min_cluster_size", t.min_cluster_size},
              {"gate_probability", t.gate_probability},
              {"confirm_m", t.confirm_m},
              {"confirm_n", t.confirm_n},
              {"verify_hits", t.verify_hits},
              {"max_misses", t.max_misses},
              {"low_confidence_tracks", t.low_confidence_tracks}};
}

void decode_into(const Json& j, TrackerConfig& t) {
  reject_unknown(j,
                 {"models", "transition", "kappa", "initial_mu", "extent_scale", "rmm_tau",
                  "initial_extent", "initial_nu", "min_extent_eig", "max_extent_eig",
                  "init_tangential_sigma", "init_turn_sigma", "cluster_radius", "min_cluster_size",
                  "gate_probability", "confirm_m", "confirm_n", "verify_hits", "max_misses",
                  "low_confidence_tracks"},
                 "tracker");
  if (j.contains("models")) {
    t.imm.models.clear();
    for (const Json& m : j["models"]) {
      t.imm.models.push_back({model_kind(m.at("kind").get<std::string>()), m.value("accel_psd", 1.0),
                              m.value("turn_psd", 0.0)});
    }
  }
  if (j.contains("transition")) {
    const Json& rows = j["transition"];
    t.imm.transition.resize(static_cast<Eigen::Index>(rows.size()),
                            static_cast<Eigen::Index>(rows.empty() ? 0 : rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows[0].size()) throw ValidationError("transition rows differ in length");
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        t.imm.transition(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
      }
    }
  }
  read(j, "kappa", t.imm.kappa);
  if (j.contains("initial_mu")) {
    const auto mu = j["initial_mu"].get<std::vector<double>>();
    t.initial_mu = Eigen::Map<const Eigen::VectorXd>(mu.data(), static_cast<Eigen::Index>(mu.size()));
  }
  read(j, "extent_scale", t.extent_scale);
  read(j, "rmm_tau", t.rmm_tau);
  read(j, "initial_extent", t.initial_extent);
  read(j, "initial_nu", t.initial_nu);
  read(j, "min_extent_eig", t.min_extent_eig);
  read(j, "max_extent_eig", t.max_extent_eig);
  read(j, "init_tangential_sigma", t.init_tangential_sigma);
  read(j, "init_turn_sigma", t.init_turn_sigma);
  read(j, "cluster_radius", t.cluster_radius);
  read(j, "min_cluster_size", t.min_cluster_size);
  read(j, "gate_probability", t.gate_probability);
  read(j, "confirm_m", t.confirm_m);
  read(j, "confirm_n", t.confirm_n);
  read(j, "verify_hits", t.verify_hits);
  read(j, "max_misses", t.max_misses);
  read(j, "low_confidence_tracks", t.low_confidence_tracks);
}

}  // namespace

PipelineConfig PipelineConfig::defaults() {
  PipelineConfig cfg;
  cfg.border_candidates = {BorderFn::constant(0.0), BorderFn::constant(1.0), BorderFn::constant(2.0),
                           BorderFn::constant(4.0), BorderFn::constant(8.0), BorderFn::constant(16.0),
                           BorderFn::linear(1.0, 0.25, 0.0, 0.0), BorderFn::linear(1.0, 0.0, 0.25, 0.0)};
  return cfg;
}

void PipelineConfig::validate() const {
  tracker.validate();
  bounds.validate();
  annotator.border.validate();
  if (!(annotator.alpha > 0.0 && annotator.alpha < 1.0)) {
    throw ValidationError("annotator alpha must lie in (0, 1)");
  }
  if (!(annotator.extent_scale > 0.0)) throw ValidationError("annotator extent scale must be positive");
  for (const auto& b : border_candidates) b.validate();
  if (!(match_gate > 0.0)) throw ValidationError("match gate must be positive");
}

FinalizerConfig PipelineConfig::finalizer(FinalizeOptions options) const {
  return FinalizerConfig{tracker, bounds, options};
}

Json encode(const PipelineConfig& cfg) {
  Json sizes = Json::object();
  for (const auto& [c, b] : cfg.bounds.sizes) sizes[std::string(to_string(c))] = encode(b);
  Json candidates = Json::array();
  for (const auto& b : cfg.border_candidates) candidates.push_back(encode(b));
  return Json{{"tracker", encode(cfg.tracker)},
              {"bounds", {{"eta_v", cfg.bounds.eta_v}, {"sizes", std::move(sizes)}}},
              {"annotator",
               {{"alpha", cfg.annotator.alpha},
                {"extent_scale", cfg.annotator.extent_scale},
                {"border", encode(cfg.annotator.border)},
                {"rho_floor_scale", cfg.annotator.rho_floor_scale}}},
              {"border_candidates", std::move(candidates)},
              {"match_gate", cfg.match_gate}};
}

PipelineConfig decode_pipeline_config(const Json& j) {
  if (!j.is_object()) throw ValidationError("pipeline config must be an object");
  PipelineConfig cfg = PipelineConfig::defaults();
  try {
    reject_unknown(j, {"tracker", "bounds", "annotator", "border_candidates", "match_gate"}, "config");
    if (j.contains("tracker")) decode_into(j["tracker"], cfg.tracker);
    if (j.contains("bounds")) {
      const Json& b = j["bounds"];
      reject_unknown(b, {"eta_v", "sizes"}, "bounds");
      read(b, "eta_v", cfg.bounds.eta_v);
      if (b.contains("sizes")) {
        for (const auto& [name, value] : b["sizes"].items()) {
          cfg.bounds.sizes[object_class_from_string(name)] = decode_size_bounds(value);
        }
      }
    }
    if (j.contains("annotator")) {
      const Json& a = j["annotator"];
      reject_unknown(a, {"alpha", "extent_scale", "border", "rho_floor_scale"}, "annotator");
      read(a, "alpha", cfg.annotator.alpha);
      read(a, "extent_scale", cfg.annotator.extent_scale);
      read(a, "rho_floor_scale", cfg.annotator.rho_floor_scale);
      if (a.contains("border")) cfg.annotator.border = decode_border(a["border"]);
    }
    if (j.contains("border_candidates")) {
      cfg.border_candidates.clear();
      for (const Json& b : j["border_candidates"]) cfg.border_candidates.push_back(decode_border(b));
    }
    read(j, "match_gate", cfg.match_gate);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw ParseError(e.what(), 1);
  }
  return decode_pipeline_config(j);
}

}  // namespace baas
