#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftlbo/geometry.hpp"

namespace ftlbo {

/// Vertical cylinder of unbounded height. Only center.x/center.y are used.
struct Obstacle {
  LocalPoint center;
  double radius{0.0};
};

/// Weights of the length, safety and task terms of the total cost.
struct CostWeights {
  double length{1.0};
  double safety{1.0};
  double task{1.0};
};

/// The planning problem: working volume, obstacles, endpoints, altitude band.
struct Scenario {
  LocalPoint lower_bound;
  LocalPoint upper_bound;
  LocalPoint start;
  LocalPoint goal;
  std::vector<Obstacle> obstacles;
  double h_min{0.0};
  double h_max{0.0};
  CostWeights weights;
  int waypoint_count{10};
  /// Geodetic anchor of the local frame, present when the config was geodetic.
  std::optional<GeoPoint> origin;
};

/// Validation failure naming the offending config field.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Inclusive componentwise containment.
inline bool validate_point_in_bounds(const Scenario& s, const LocalPoint& p) {
  return p.x >= s.lower_bound.x && p.x <= s.upper_bound.x && p.y >= s.lower_bound.y &&
         p.y <= s.upper_bound.y && p.z >= s.lower_bound.z && p.z <= s.upper_bound.z;
}

/// Throws ScenarioError on the first violated invariant.
inline void validate_scenario(const Scenario& s) {
  const auto finite = [](const LocalPoint& p) { return is_finite(p); };
  if (!finite(s.lower_bound)) throw ScenarioError("bounds.lower", "non-finite coordinate");
  if (!finite(s.upper_bound)) throw ScenarioError("bounds.upper", "non-finite coordinate");
  if (!(s.lower_bound.x < s.upper_bound.x && s.lower_bound.y < s.upper_bound.y &&
        s.lower_bound.z < s.upper_bound.z))
    throw ScenarioError("bounds", "lower bound must be strictly below upper bound on every axis");
  if (!std::isfinite(s.h_min) || !std::isfinite(s.h_max))
    throw ScenarioError("altitude", "non-finite altitude limit");
  if (s.h_min <= 0.0) throw ScenarioError("altitude.h_min", "must be positive");
  if (s.h_min >= s.h_max) throw ScenarioError("altitude", "altitude band empty");
  if (!finite(s.start)) throw ScenarioError("start", "non-finite coordinate");
  if (!finite(s.goal)) throw ScenarioError("goal", "non-finite coordinate");
  if (s.start == s.goal) throw ScenarioError("goal", "start and goal coincide");
  if (!validate_point_in_bounds(s, s.start)) throw ScenarioError("start", "outside bounds");
  if (!validate_point_in_bounds(s, s.goal)) throw ScenarioError("goal", "outside bounds");
  const auto& w = s.weights;
  for (double v : {w.length, w.safety, w.task}) {
    if (!std::isfinite(v) || v < 0.0) throw ScenarioError("weights", "must be finite and nonnegative");
  }
  if (w.length == 0.0 && w.safety == 0.0 && w.task == 0.0)
    throw ScenarioError("weights", "all weights are zero");
  if (s.waypoint_count < 0) throw ScenarioError("waypoint_count", "must be nonnegative");
  for (std::size_t k = 0; k < s.obstacles.size(); ++k) {
    const auto& o = s.obstacles[k];
    const std::string field = "obstacles[" + std::to_string(k) + "]";
    if (!std::isfinite(o.center.x) || !std::isfinite(o.center.y))
      throw ScenarioError(field, "non-finite center");
    if (!std::isfinite(o.radius) || o.radius <= 0.0) throw ScenarioError(field, "nonpositive radius");
    if (o.center.x < s.lower_bound.x || o.center.x > s.upper_bound.x ||
        o.center.y < s.lower_bound.y || o.center.y > s.upper_bound.y)
      throw ScenarioError(field, "center outside working area");
  }
}

/// Index of the first obstacle whose disk contains `p` horizontally, if any.
inline std::optional<std::size_t> obstacle_containing(const Scenario& s, const LocalPoint& p) {
  for (std::size_t k = 0; k < s.obstacles.size(); ++k) {
    const auto& o = s.obstacles[k];
    if (std::hypot(p.x - o.center.x, p.y - o.center.y) <= o.radius) return k;
  }
  return std::nullopt;
}

}  // namespace ftlbo
