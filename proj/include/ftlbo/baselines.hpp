#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ftlbo/fitness.hpp"
#include "ftlbo/population.hpp"
#include "ftlbo/random.hpp"

namespace ftlbo {

enum class BaselineAlgorithm { kGa, kThetaPso };

struct BaselineParams {
  BaselineAlgorithm algorithm{BaselineAlgorithm::kGa};
  int population{100};
  int iterations{150};
  std::uint64_t seed{1};
  int threads{1};
  std::optional<std::int64_t> evaluation_budget;

  // GA
  double crossover_rate{0.9};
  double mutation_rate{0.1};  // per gene
  int tournament_size{3};
  double mutation_sigma_fraction{0.05};  // of the axis range

  // theta-PSO
  double inertia{0.729};
  double cognitive{1.494};
  double social{1.494};
  double max_angle_velocity{std::numbers::pi / 2.0};
};

inline void validate(const BaselineParams& p) {
  if (p.population < 2) throw std::invalid_argument("population must be at least 2");
  if (p.iterations < 0) throw std::invalid_argument("iterations must be nonnegative");
  for (double r : {p.crossover_rate, p.mutation_rate}) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("rates must lie in [0, 1]");
  }
  if (p.tournament_size < 1) throw std::invalid_argument("tournament size must be positive");
}

namespace detail {

inline bool baseline_continues(const BaselineParams& p, int done, std::int64_t used, std::int64_t per_iteration) {
  if (p.evaluation_budget) return used + per_iteration <= *p.evaluation_budget;
  return done < p.iterations;
}

inline std::size_t tournament(std::span<const Student> pop, int size, Rng& rng) {
  const int n = static_cast<int>(pop.size());
  auto best = static_cast<std::size_t>(rng.integer(0, n - 1));
  for (int t = 1; t < size; ++t) {
    const auto k = static_cast<std::size_t>(rng.integer(0, n - 1));
    if (cost_less(pop[k].cost, pop[best].cost)) best = k;
  }
  return best;
}

}  // namespace detail

/// Elitist generational GA: tournament selection, per-gene arithmetic
/// crossover, per-gene Gaussian mutation. The best individual is carried
/// over unevaluated, so a generation costs population - 1 evaluations.
inline OptimizationResult run_ga(const EvaluationContext& ctx, const BaselineParams& p) {
  validate(p);
  require_feasible_endpoints(ctx);
  Evaluator eval(ctx, p.threads);
  const auto bounds = search_bounds(ctx.scenario);
  Rng rng(p.seed, Rng::kAlgorithm);
  auto pop = initial_population(eval, p.population, p.seed);

  OptimizationResult result;
  record_progress(result.record, 0, pop, eval.evaluations(), result.best);
  const std::int64_t per_iteration = p.population - 1;
  int gen = 0;
  while (detail::baseline_continues(p, gen, eval.evaluations(), per_iteration)) {
    ++gen;
    std::vector<std::vector<double>> children;
    children.reserve(pop.size() - 1);
    while (children.size() + 1 < pop.size()) {
      const auto& a = pop[detail::tournament(pop, p.tournament_size, rng)].vector;
      const auto& b = pop[detail::tournament(pop, p.tournament_size, rng)].vector;
      std::vector<double> child = a;
      if (rng.uniform() < p.crossover_rate) {
        for (std::size_t k = 0; k < child.size(); ++k) {
          const double alpha = rng.uniform();
          child[k] = alpha * a[k] + (1.0 - alpha) * b[k];
        }
      }
      for (std::size_t k = 0; k < child.size(); ++k) {
        if (rng.uniform() < p.mutation_rate) child[k] += rng.normal(0.0, p.mutation_sigma_fraction * bounds.range(k));
      }
      bounds.clamp(child);
      children.push_back(std::move(child));
    }
    const auto costs = eval.batch(children);
    std::vector<Student> next;
    next.reserve(pop.size());
    next.push_back(pop[best_index(pop)]);
    for (std::size_t i = 0; i < children.size(); ++i) next.push_back({std::move(children[i]), costs[i]});
    pop = std::move(next);
    record_progress(result.record, gen, pop, eval.evaluations(), result.best);
  }
  return result;
}

// ---------------------------------------------------------------------------
// theta-PSO
// ---------------------------------------------------------------------------

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// x = mid + half_range * sin(theta), theta in [-pi/2, pi/2].
inline double decode_angle(double theta, double lower, double upper) {
  const double mid = 0.5 * (lower + upper);
  const double half = 0.5 * (upper - lower);
  return std::clamp(mid + half * std::sin(theta), lower, upper);
}

inline double encode_angle(double x, double lower, double upper) {
  const double mid = 0.5 * (lower + upper);
  const double half = 0.5 * (upper - lower);
  return std::asin(std::clamp((x - mid) / half, -1.0, 1.0));
}

/// Phase-angle PSO: particles fly in angle space and are decoded through the
/// sine map, which keeps every position inside the box.
inline OptimizationResult run_theta_pso(const EvaluationContext& ctx, const BaselineParams& p) {
  validate(p);
  require_feasible_endpoints(ctx);
  Evaluator eval(ctx, p.threads);
  const auto bounds = search_bounds(ctx.scenario);
  const std::size_t dim = bounds.dimension();
  Rng rng(p.seed, Rng::kAlgorithm);
  auto swarm = initial_population(eval, p.population, p.seed);

  const auto n = swarm.size();
  std::vector<std::vector<double>> theta(n, std::vector<double>(dim));
  std::vector<std::vector<double>> velocity(n, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < dim; ++k) theta[i][k] = encode_angle(swarm[i].vector[k], bounds.lower[k], bounds.upper[k]);
  }
  auto personal_theta = theta;
  auto personal = swarm;
  std::size_t g = best_index(personal);
  auto global_theta = personal_theta[g];

  OptimizationResult result;
  record_progress(result.record, 0, personal, eval.evaluations(), result.best);
  const auto per_iteration = static_cast<std::int64_t>(n);
  int it = 0;
  while (detail::baseline_continues(p, it, eval.evaluations(), per_iteration)) {
    ++it;
    std::vector<std::vector<double>> positions(n, std::vector<double>(dim));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < dim; ++k) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        double v = p.inertia * velocity[i][k] + p.cognitive * r1 * (personal_theta[i][k] - theta[i][k]) +
                   p.social * r2 * (global_theta[k] - theta[i][k]);
        v = std::clamp(v, -p.max_angle_velocity, p.max_angle_velocity);
        velocity[i][k] = v;
        theta[i][k] = std::clamp(theta[i][k] + v, -kHalfPi, kHalfPi);
        positions[i][k] = decode_angle(theta[i][k], bounds.lower[k], bounds.upper[k]);
      }
    }
    const auto costs = eval.batch(positions);
    for (std::size_t i = 0; i < n; ++i) {
      if (cost_less(costs[i], personal[i].cost)) {
        personal[i] = {std::move(positions[i]), costs[i]};
        personal_theta[i] = theta[i];
      }
    }
    g = best_index(personal);
    global_theta = personal_theta[g];
    record_progress(result.record, it, personal, eval.evaluations(), result.best);
  }
  return result;
}

}  // namespace ftlbo
