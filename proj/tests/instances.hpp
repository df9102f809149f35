#pragma once

// Random small planning instances paired with their oracle transcription.

#include "ftlbo/ftlbo.hpp"
#include "oracle.hpp"

namespace instances {

using namespace ftlbo;

struct Instance {
  EvaluationContext ctx;
  CentroidPath path;
  oracle::Problem problem;
};

inline Instance random_instance(Rng& rng) {
  Scenario s;
  s.lower_bound = {0, 0, 0};
  s.upper_bound = {30, 30, 12};
  s.h_min = rng.uniform(1, 4);
  s.h_max = s.h_min + rng.uniform(0.5, 5);
  s.weights = {rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3)};
  if (rng.uniform() < 0.15) s.weights.safety = 0.0;
  s.waypoint_count = rng.integer(0, 2);
  const int k = rng.integer(0, 3);
  for (int i = 0; i < k; ++i) s.obstacles.push_back({{rng.uniform(0, 30), rng.uniform(0, 30), 0}, rng.uniform(0.5, 5)});
  auto pick = [&] { return LocalPoint{rng.uniform(0, 30), rng.uniform(0, 30), rng.uniform(-1, 12)}; };
  s.start = pick();
  s.goal = pick();
  CentroidPath path{s.start, {}, s.goal};
  for (int j = 0; j < s.waypoint_count; ++j) path.waypoints.push_back(pick());

  FormationSpec spec;
  const int n = rng.integer(1, 3);
  for (int i = 0; i < n; ++i) spec.offsets.push_back({rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-2, 2)});
  spec.uav_count = n;

  oracle::Problem p;
  for (const auto& q : path.nodes()) p.nodes.push_back({q.x, q.y, q.z});
  for (const auto& o : spec.offsets) p.offsets.push_back({o.x, o.y, o.z});
  for (const auto& o : s.obstacles) p.disks.push_back({o.center.x, o.center.y, o.radius});
  p.h_min = s.h_min;
  p.h_max = s.h_max;
  p.alpha = s.weights.length;
  p.beta = s.weights.safety;
  p.gamma = s.weights.task;
  return {{s, spec, false}, path, p};
}


}  // namespace instances
