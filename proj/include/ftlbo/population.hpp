#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftlbo/fitness.hpp"
#include "ftlbo/parallel.hpp"
#include "ftlbo/random.hpp"

namespace ftlbo {

/// One candidate solution: flattened interior waypoints plus its cached cost.
struct Student {
  std::vector<double> vector;
  CostBreakdown cost;
};

/// Per-dimension box the decision vector lives in.
struct SearchBounds {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dimension() const { return lower.size(); }
  double range(std::size_t k) const { return upper[k] - lower[k]; }
  double mid(std::size_t k) const { return 0.5 * (upper[k] + lower[k]); }

  void clamp(std::span<double> v) const {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::clamp(v[k], lower[k], upper[k]);
  }
  bool contains(std::span<const double> v) const {
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] < lower[k] || v[k] > upper[k]) return false;
    }
    return true;
  }
};

inline SearchBounds search_bounds(const Scenario& s) {
  SearchBounds b;
  const auto d = static_cast<std::size_t>(3 * s.waypoint_count);
  b.lower.reserve(d);
  b.upper.reserve(d);
  for (int j = 0; j < s.waypoint_count; ++j) {
    b.lower.insert(b.lower.end(), {s.lower_bound.x, s.lower_bound.y, s.lower_bound.z});
    b.upper.insert(b.upper.end(), {s.upper_bound.x, s.upper_bound.y, s.upper_bound.z});
  }
  return b;
}

struct ConvergenceEntry {
  int iteration{0};
  double best_total{0.0};
  double mean_total{0.0};
  std::int64_t evaluations{0};
};

struct ConvergenceRecord {
  std::vector<ConvergenceEntry> entries;
};

struct OptimizationResult {
  Student best;
  ConvergenceRecord record;
};

/// Start or goal lies inside an obstacle disk: no path can be feasible.
class InfeasibleScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_feasible_endpoints(const EvaluationContext& ctx) {
  const auto& s = ctx.scenario;
  if (auto k = obstacle_containing(s, s.start))
    throw InfeasibleScenario("start lies inside obstacle " + std::to_string(*k));
  if (auto k = obstacle_containing(s, s.goal))
    throw InfeasibleScenario("goal lies inside obstacle " + std::to_string(*k));
}

/// Scores batches of candidate vectors, possibly on several threads, and
/// counts every evaluation.
class Evaluator {
 public:
  Evaluator(const EvaluationContext& ctx, int threads) : ctx_(ctx), threads_(threads) {}

  CostBreakdown operator()(std::span<const double> v) {
    ++evaluations_;
    return evaluate_vector(v, ctx_);
  }

  std::vector<CostBreakdown> batch(const std::vector<std::vector<double>>& candidates) {
    std::vector<CostBreakdown> out(candidates.size());
    parallel_for(candidates.size(), threads_, [&](std::size_t i) { out[i] = evaluate_vector(candidates[i], ctx_); });
    evaluations_ += static_cast<std::int64_t>(candidates.size());
    return out;
  }

  std::int64_t evaluations() const { return evaluations_; }
  const EvaluationContext& context() const { return ctx_; }

 private:
  const EvaluationContext& ctx_;
  int threads_;
  std::int64_t evaluations_{0};
};

/// Waypoints evenly spaced on the start-goal segment.
inline std::vector<double> straight_line_vector(const Scenario& s) {
  CentroidPath p{s.start, {}, s.goal};
  for (int j = 1; j <= s.waypoint_count; ++j) {
    const double t = static_cast<double>(j) / (s.waypoint_count + 1);
    p.waypoints.push_back(s.start + t * (s.goal - s.start));
  }
  return vector_from_path(p);
}

/// Uniform random population in the search box, drawn from the seed's
/// population stream so every algorithm starting from `seed` sees the same
/// students.
inline std::vector<Student> initial_population(Evaluator& eval, int size, std::uint64_t seed,
                                               bool seed_straight_line = false) {
  const auto& s = eval.context().scenario;
  const auto bounds = search_bounds(s);
  Rng rng(seed, Rng::kPopulation);
  std::vector<std::vector<double>> vectors(static_cast<std::size_t>(size));
  for (auto& v : vectors) {
    v.resize(bounds.dimension());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = rng.uniform() * bounds.range(k) + bounds.lower[k];
  }
  if (seed_straight_line && !vectors.empty()) {
    vectors.front() = straight_line_vector(s);
    bounds.clamp(vectors.front());
  }
  const auto costs = eval.batch(vectors);
  std::vector<Student> out;
  out.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) out.push_back({std::move(vectors[i]), costs[i]});
  return out;
}

/// Lowest-cost student; ties go to the lower index.
inline std::size_t best_index(std::span<const Student> students) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < students.size(); ++i) {
    if (cost_less(students[i].cost, students[best].cost)) best = i;
  }
  return best;
}

/// Highest-cost student; ties go to the lower index.
inline std::size_t worst_index(std::span<const Student> students) {
  std::size_t worst = 0;
  for (std::size_t i = 1; i < students.size(); ++i) {
    if (cost_less(students[worst].cost, students[i].cost)) worst = i;
  }
  return worst;
}

inline double mean_total(std::span<const Student> students) {
  double sum = 0.0;
  for (const auto& s : students) sum += s.cost.total;
  return students.empty() ? 0.0 : sum / static_cast<double>(students.size());
}

/// Appends one convergence entry. The best is taken as the better of the
/// population's best and `incumbent`, and `incumbent` is updated, so the
/// recorded sequence never increases.
inline void record_progress(ConvergenceRecord& rec, int iteration, std::span<const Student> students,
                            std::int64_t evaluations, Student& incumbent) {
  const auto& champion = students[best_index(students)];
  if (rec.entries.empty() || cost_less(champion.cost, incumbent.cost)) incumbent = champion;
  rec.entries.push_back({iteration, incumbent.cost.total, mean_total(students), evaluations});
}

}  // namespace ftlbo
