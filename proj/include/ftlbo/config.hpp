#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "ftlbo/baselines.hpp"
#include "ftlbo/formation.hpp"
#include "ftlbo/geometry.hpp"
#include "ftlbo/optimizer.hpp"
#include "ftlbo/scenario.hpp"

namespace ftlbo {

/// Optimizer knobs carried by a scenario config; CLI flags override them.
struct PlannerSettings {
  int population{100};
  int iterations{150};
  std::uint64_t seed{1};
  int subjects{0};
  std::optional<double> mutation_scale;
  bool strict_per_uav_safety{false};
  bool seed_straight_line{false};
  LearnerRule subject_rule{LearnerRule::kDirected};
  LearnerRule tlbo_learner_rule{LearnerRule::kAbsolute};
  BaselineParams baseline;
};

/// Everything one config file describes.
struct ScenarioConfig {
  Scenario scenario;
  FormationSpec formation;
  PlannerSettings planner;
  nlohmann::json source;

  EvaluationContext context() const { return {scenario, formation, planner.strict_per_uav_safety}; }
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void config_fail(const std::string& field, const std::string& msg) {
  throw ScenarioError(field, msg);
}

inline const json& require(const json& obj, const char* key, const std::string& field) {
  if (!obj.is_object() || !obj.contains(key)) config_fail(field.empty() ? key : field + "." + key, "missing");
  return obj.at(key);
}

inline double number(const json& v, const std::string& field) {
  if (!v.is_number()) config_fail(field, "expected a number");
  return v.get<double>();
}

inline int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) config_fail(field, "expected an integer");
  return v.get<int>();
}

inline double number_or(const json& obj, const char* key, double fallback, const std::string& field) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return fallback;
  return number(obj.at(key), field + "." + key);
}

inline Vec3 vec3(const json& v, const std::string& field, bool z_optional = false) {
  if (!v.is_array() || v.size() < (z_optional ? 2u : 3u) || v.size() > 3)
    config_fail(field, z_optional ? "expected [x, y] or [x, y, z]" : "expected [x, y, z]");
  Vec3 out{number(v[0], field + "[0]"), number(v[1], field + "[1]"), 0.0};
  if (v.size() == 3) out.z = number(v[2], field + "[2]");
  return out;
}

inline GeoPoint geo(const json& v, const std::string& field) {
  GeoPoint g;
  if (v.is_array() && v.size() == 2) {
    g = {number(v[0], field + "[0]"), number(v[1], field + "[1]")};
  } else if (v.is_object()) {
    g = {number(require(v, "lat", field), field + ".lat"), number(require(v, "lon", field), field + ".lon")};
  } else {
    config_fail(field, "expected {\"lat\", \"lon\"} or [lat, lon]");
  }
  if (!is_valid(g)) config_fail(field, "latitude/longitude out of range");
  return g;
}

/// A point in either frame: [x, y, z] or {"lat", "lon", "alt"}.
inline LocalPoint point(const json& v, const std::optional<GeoPoint>& origin, const std::string& field) {
  if (v.is_array()) return vec3(v, field);
  if (v.is_object() && v.contains("lat")) {
    if (!origin) config_fail(field, "geodetic point needs a geodetic origin");
    LocalPoint p;
    try {
      p = geo_to_local(*origin, geo(v, field));
    } catch (const GeoError& e) {
      config_fail(field, e.what());
    }
    p.z = number_or(v, "alt", 0.0, field);
    return p;
  }
  config_fail(field, "expected [x, y, z] or {\"lat\", \"lon\", \"alt\"}");
}

inline FormationSpec parse_formation(const json& f) {
  if (f.contains("offsets")) {
    const auto& arr = f.at("offsets");
    if (!arr.is_array() || arr.empty()) config_fail("formation.offsets", "expected a non-empty list");
    FormationSpec spec;
    for (std::size_t i = 0; i < arr.size(); ++i)
      spec.offsets.push_back(vec3(arr[i], "formation.offsets[" + std::to_string(i) + "]"));
    spec.uav_count = static_cast<int>(spec.offsets.size());
    if (f.contains("radius")) spec.radius = number(f.at("radius"), "formation.radius");
    return spec;
  }
  const int n = integer(require(f, "uav_count", "formation"), "formation.uav_count");
  const double r = number(require(f, "radius", "formation"), "formation.radius");
  const Vec3 normal = f.contains("plane_normal") ? vec3(f.at("plane_normal"), "formation.plane_normal")
                                                 : Vec3{0.0, 1.0, 0.0};
  try {
    return regular_offsets(n, r, normal);
  } catch (const std::invalid_argument& e) {
    config_fail("formation", e.what());
  }
}

inline LearnerRule learner_rule(const json& v, const std::string& field) {
  if (v == "absolute") return LearnerRule::kAbsolute;
  if (v == "directed") return LearnerRule::kDirected;
  config_fail(field, "expected \"absolute\" or \"directed\"");
}

inline void parse_planner(const json& o, PlannerSettings& p) {
  if (!o.is_object()) config_fail("optimizer", "expected an object");
  if (o.contains("population")) p.population = integer(o.at("population"), "optimizer.population");
  if (o.contains("iterations")) p.iterations = integer(o.at("iterations"), "optimizer.iterations");
  if (o.contains("seed")) {
    if (!o.at("seed").is_number_unsigned()) config_fail("optimizer.seed", "expected a nonnegative integer");
    p.seed = o.at("seed").get<std::uint64_t>();
  }
  if (o.contains("subjects")) p.subjects = integer(o.at("subjects"), "optimizer.subjects");
  if (o.contains("mutation_scale") && !o.at("mutation_scale").is_null())
    p.mutation_scale = number(o.at("mutation_scale"), "optimizer.mutation_scale");
  if (o.contains("strict_per_uav_safety")) p.strict_per_uav_safety = o.at("strict_per_uav_safety").get<bool>();
  if (o.contains("seed_straight_line")) p.seed_straight_line = o.at("seed_straight_line").get<bool>();
  if (o.contains("subject_rule")) p.subject_rule = learner_rule(o.at("subject_rule"), "optimizer.subject_rule");
  if (o.contains("tlbo_learner_rule"))
    p.tlbo_learner_rule = learner_rule(o.at("tlbo_learner_rule"), "optimizer.tlbo_learner_rule");
  if (p.population < 4) config_fail("optimizer.population", "must be at least 4");
  if (p.iterations < 0) config_fail("optimizer.iterations", "must be nonnegative");
  if (p.subjects < 0) config_fail("optimizer.subjects", "must be nonnegative");
  if (p.mutation_scale && !(*p.mutation_scale > 0.0)) config_fail("optimizer.mutation_scale", "must be positive");

  auto& b = p.baseline;
  if (o.contains("ga")) {
    const auto& g = o.at("ga");
    b.crossover_rate = number_or(g, "crossover_rate", b.crossover_rate, "optimizer.ga");
    b.mutation_rate = number_or(g, "mutation_rate", b.mutation_rate, "optimizer.ga");
    b.mutation_sigma_fraction = number_or(g, "mutation_sigma_fraction", b.mutation_sigma_fraction, "optimizer.ga");
    if (g.contains("tournament_size")) b.tournament_size = integer(g.at("tournament_size"), "optimizer.ga.tournament_size");
  }
  if (o.contains("theta_pso")) {
    const auto& t = o.at("theta_pso");
    b.inertia = number_or(t, "inertia", b.inertia, "optimizer.theta_pso");
    b.cognitive = number_or(t, "cognitive", b.cognitive, "optimizer.theta_pso");
    b.social = number_or(t, "social", b.social, "optimizer.theta_pso");
  }
  try {
    BaselineParams probe = b;
    probe.population = p.population;
    validate(probe);
  } catch (const std::invalid_argument& e) {
    config_fail("optimizer", e.what());
  }
}

}  // namespace detail

/// Parses and validates a scenario config (JSON). See docs/scenario-format.md.
///
/// Geodetic configs give the working area as two opposite corner vertices;
/// the corner with the smaller latitude and longitude becomes the origin of
/// the local frame, so the lower bound is (0, 0, z_min).
inline ScenarioConfig load_config(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("config", std::string("parse failure: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("config", "top level must be an object");

  ScenarioConfig cfg;
  cfg.source = doc;
  Scenario& s = cfg.scenario;
  try {
    const std::string frame = doc.value("frame", std::string("local"));
    if (frame == "geodetic") {
      const auto& area = detail::require(doc, "area", "");
      const auto& verts = detail::require(area, "vertices", "area");
      if (!verts.is_array() || verts.size() != 2) detail::config_fail("area.vertices", "expected two opposite corners");
      const GeoPoint a = detail::geo(verts[0], "area.vertices[0]");
      const GeoPoint b = detail::geo(verts[1], "area.vertices[1]");
      const GeoPoint origin{std::min(a.latitude, b.latitude), std::min(a.longitude, b.longitude)};
      const GeoPoint far{std::max(a.latitude, b.latitude), std::max(a.longitude, b.longitude)};
      LocalPoint extent;
      try {
        extent = geo_to_local(origin, far);
      } catch (const GeoError& e) {
        detail::config_fail("area.vertices", e.what());
      }
      s.origin = origin;
      s.lower_bound = {0.0, 0.0, detail::number(detail::require(area, "z_min", "area"), "area.z_min")};
      s.upper_bound = {extent.x, extent.y, detail::number(detail::require(area, "z_max", "area"), "area.z_max")};
    } else if (frame == "local") {
      const auto& bounds = detail::require(doc, "bounds", "");
      s.lower_bound = detail::vec3(detail::require(bounds, "lower", "bounds"), "bounds.lower");
      s.upper_bound = detail::vec3(detail::require(bounds, "upper", "bounds"), "bounds.upper");
      if (doc.contains("origin")) s.origin = detail::geo(doc.at("origin"), "origin");
    } else {
      detail::config_fail("frame", "expected \"geodetic\" or \"local\"");
    }

    s.start = detail::point(detail::require(doc, "start", ""), s.origin, "start");
    s.goal = detail::point(detail::require(doc, "goal", ""), s.origin, "goal");

    if (doc.contains("obstacles")) {
      const auto& obs = doc.at("obstacles");
      if (!obs.is_array()) detail::config_fail("obstacles", "expected a list");
      for (std::size_t k = 0; k < obs.size(); ++k) {
        const std::string field = "obstacles[" + std::to_string(k) + "]";
        const auto& o = obs[k];
        Obstacle ob;
        if (o.contains("center")) {
          ob.center = detail::vec3(o.at("center"), field + ".center", true);
        } else {
          ob.center = detail::point(o, s.origin, field);
        }
        ob.center.z = 0.0;
        ob.radius = detail::number(detail::require(o, "radius", field), field + ".radius");
        s.obstacles.push_back(ob);
      }
    }

    const auto& alt = detail::require(doc, "altitude", "");
    s.h_min = detail::number(detail::require(alt, "h_min", "altitude"), "altitude.h_min");
    s.h_max = detail::number(detail::require(alt, "h_max", "altitude"), "altitude.h_max");

    if (doc.contains("weights")) {
      const auto& w = doc.at("weights");
      s.weights.length = detail::number_or(w, "alpha", 1.0, "weights");
      s.weights.safety = detail::number_or(w, "beta", 1.0, "weights");
      s.weights.task = detail::number_or(w, "gamma", 1.0, "weights");
    }
    if (doc.contains("waypoint_count")) s.waypoint_count = detail::integer(doc.at("waypoint_count"), "waypoint_count");

    cfg.formation = doc.contains("formation") ? detail::parse_formation(doc.at("formation"))
                                              : FormationSpec{1, {Vec3{}}, std::nullopt};
    if (doc.contains("optimizer")) detail::parse_planner(doc.at("optimizer"), cfg.planner);
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError("config", e.what());
  }

  validate_scenario(s);
  return cfg;
}

inline Scenario load_scenario(std::string_view text) { return load_config(text).scenario; }

}  // namespace ftlbo
