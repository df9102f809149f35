#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "ftlbo/formation.hpp"
#include "ftlbo/geometry.hpp"
#include "ftlbo/scenario.hpp"

namespace ftlbo {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Cost terms of one candidate path and their weighted total.
struct CostBreakdown {
  double length_cost{0.0};
  double safety_cost{0.0};
  double task_cost{0.0};
  double total{0.0};
  /// Sum of the weighted terms that are finite; ranks infeasible candidates.
  double finite_partial{0.0};
  /// How deep an infeasible path goes into forbidden space: summed horizontal
  /// penetration into obstacle disks plus depth at or below ground. Zero for
  /// feasible paths.
  double infeasibility{0.0};

  bool feasible() const { return std::isfinite(total); }
};

/// Strict "a is better than b": any finite total beats any infinite one; two
/// infinite totals are ranked by infeasibility, then finite_partial, then
/// length.
inline bool cost_less(const CostBreakdown& a, const CostBreakdown& b) {
  const bool fa = a.feasible();
  const bool fb = b.feasible();
  if (fa && fb) return a.total < b.total;
  if (fa != fb) return fa;
  if (a.infeasibility != b.infeasibility) return a.infeasibility < b.infeasibility;
  if (a.finite_partial != b.finite_partial) return a.finite_partial < b.finite_partial;
  return a.length_cost < b.length_cost;
}

inline CostBreakdown combine_costs(double length, double safety, double task, const CostWeights& w) {
  CostBreakdown c{length, safety, task, 0.0, 0.0, 0.0};
  bool infinite = false;
  // A zero weight removes its term entirely, so 0 * inf never produces NaN.
  for (auto [weight, value] : {std::pair{w.length, length}, {w.safety, safety}, {w.task, task}}) {
    if (weight == 0.0) continue;
    if (std::isinf(value)) {
      infinite = true;
    } else {
      c.finite_partial += weight * value;
    }
  }
  c.total = infinite ? kInfinity : c.finite_partial;
  return c;
}

/// Fixed problem data every candidate is scored against.
struct EvaluationContext {
  Scenario scenario;
  FormationSpec formation;
  /// Also score obstacle violation along every derived UAV path.
  bool strict_per_uav_safety{false};
};

inline double polyline_length(std::span<const LocalPoint> nodes) {
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) sum += distance(nodes[j], nodes[j + 1]);
  return sum;
}

inline double length_cost(const CentroidPath& path) {
  const auto nodes = path.nodes();
  return polyline_length(nodes);
}

/// R/d for horizontal clearance d > R, +inf otherwise.
inline double segment_obstacle_violation(const LocalPoint& a, const LocalPoint& b, const Obstacle& obs) {
  const double d = horizontal_segment_distance(a, b, obs.center);
  if (d <= obs.radius) return kInfinity;
  return obs.radius / d;
}

/// Mean violation over all (segment, obstacle) pairs of a node sequence.
inline double polyline_violation(std::span<const LocalPoint> nodes, std::span<const Obstacle> obstacles) {
  if (obstacles.empty() || nodes.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    for (const auto& obs : obstacles) {
      const double v = segment_obstacle_violation(nodes[j], nodes[j + 1], obs);
      if (std::isinf(v)) return kInfinity;
      sum += v;
    }
  }
  const double pairs = static_cast<double>(nodes.size() - 1) * static_cast<double>(obstacles.size());
  return sum / pairs;
}

/// Summed horizontal penetration (R - d) over segment/obstacle pairs with d <= R.
inline double polyline_penetration(std::span<const LocalPoint> nodes, std::span<const Obstacle> obstacles) {
  double depth = 0.0;
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    for (const auto& obs : obstacles) {
      const double d = horizontal_segment_distance(nodes[j], nodes[j + 1], obs.center);
      if (d <= obs.radius) depth += obs.radius - d;
    }
  }
  return depth;
}

inline double safety_cost(const CentroidPath& path, const Scenario& scenario) {
  const auto nodes = path.nodes();
  return polyline_violation(nodes, scenario.obstacles);
}

inline double altitude_cost_at(double h, double h_min, double h_max) {
  if (h <= 0.0) return kInfinity;
  if (h < h_min) return h_min - h;
  if (h > h_max) return h - h_max;
  return 0.0;
}

inline double task_cost(std::span<const UavPath> uav_paths, const Scenario& scenario) {
  double sum = 0.0;
  for (const auto& p : uav_paths) {
    for (const auto& node : p.nodes) {
      const double c = altitude_cost_at(node.z, scenario.h_min, scenario.h_max);
      if (std::isinf(c)) return kInfinity;
      sum += c;
    }
  }
  return sum;
}

inline CostBreakdown evaluate(const CentroidPath& path, const EvaluationContext& ctx) {
  const auto& s = ctx.scenario;
  const auto nodes = path.nodes();
  const auto uav_paths = derive_uav_paths(path, ctx.formation);

  const double length = polyline_length(nodes);
  double safety = polyline_violation(nodes, s.obstacles);
  if (ctx.strict_per_uav_safety && std::isfinite(safety) && !uav_paths.empty()) {
    double uav_sum = 0.0;
    for (const auto& p : uav_paths) {
      const double v = polyline_violation(p.nodes, s.obstacles);
      if (std::isinf(v)) {
        uav_sum = kInfinity;
        break;
      }
      uav_sum += v;
    }
    safety = std::isinf(uav_sum) ? kInfinity
                                 : 0.5 * (safety + uav_sum / static_cast<double>(uav_paths.size()));
  }
  const double task = task_cost(uav_paths, s);
  auto cost = combine_costs(length, safety, task, s.weights);
  if (!cost.feasible()) {
    if (s.weights.safety != 0.0 && std::isinf(safety)) {
      cost.infeasibility += polyline_penetration(nodes, s.obstacles);
      if (ctx.strict_per_uav_safety) {
        for (const auto& p : uav_paths) cost.infeasibility += polyline_penetration(p.nodes, s.obstacles);
      }
    }
    if (s.weights.task != 0.0 && std::isinf(task)) {
      for (const auto& p : uav_paths) {
        for (const auto& node : p.nodes) {
          if (node.z <= 0.0) cost.infeasibility += -node.z;
        }
      }
    }
  }
  return cost;
}

/// Interprets a flat [x1 y1 z1 x2 ...] vector as the interior waypoints.
inline CentroidPath path_from_vector(const Scenario& s, std::span<const double> v) {
  CentroidPath path{s.start, {}, s.goal};
  path.waypoints.reserve(v.size() / 3);
  for (std::size_t i = 0; i + 2 < v.size(); i += 3) path.waypoints.push_back({v[i], v[i + 1], v[i + 2]});
  return path;
}

inline std::vector<double> vector_from_path(const CentroidPath& path) {
  std::vector<double> v;
  v.reserve(path.waypoints.size() * 3);
  for (const auto& w : path.waypoints) {
    v.push_back(w.x);
    v.push_back(w.y);
    v.push_back(w.z);
  }
  return v;
}

inline CostBreakdown evaluate_vector(std::span<const double> v, const EvaluationContext& ctx) {
  return evaluate(path_from_vector(ctx.scenario, v), ctx);
}

}  // namespace ftlbo
