#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ftlbo/fitness.hpp"
#include "ftlbo/population.hpp"
#include "ftlbo/random.hpp"

namespace ftlbo {

// ---------------------------------------------------------------------------
// Scalar update rules
// ---------------------------------------------------------------------------

/// Teacher move: s + w0 * (teacher - lambda * mean).
inline double teacher_step(double s, double teacher, double mean, double w0, int lambda) {
  return s + w0 * (teacher - lambda * mean);
}

/// Learner move with the absolute partner difference: s + w * |a - b|.
inline double learner_step(double s, double a, double b, double w) { return s + w * std::abs(a - b); }

/// Canonical signed learner move: toward `better` and away from `worse`.
inline double directed_step(double s, double better, double worse, double w) { return s + w * (better - worse); }

/// How learners use a classmate. kAbsolute adds w * |difference|;
/// kDirected moves toward whichever of the pair is better.
enum class LearnerRule { kAbsolute, kDirected };

/// Logistic map at full chaos, 4x(1-x). Stays in [0, 1] for x in [0, 1].
inline double chaos_step(double x) { return std::clamp(4.0 * x * (1.0 - x), 0.0, 1.0); }

/// Maps a chaos value in [0, 1] to a perturbation in [-1, 1].
inline double mutation_variable(double x) { return 2.0 * x - 1.0; }

/// Linearly decaying mutation probability 1 - iteration / max_iteration.
inline double mutation_probability(int iteration, int max_iteration) {
  if (max_iteration <= 0) throw std::invalid_argument("max_iteration must be positive");
  if (iteration < 0 || iteration > max_iteration) throw std::invalid_argument("iteration out of range");
  return 1.0 - static_cast<double>(iteration) / max_iteration;
}

// ---------------------------------------------------------------------------
// Classroom
// ---------------------------------------------------------------------------

/// Population state shared by the TLBO phases.
struct Classroom {
  std::vector<Student> students;
  SearchBounds bounds;
  int subjects{1};
  Rng rng{0};
  double chaos_state{0.3};
  int iteration{0};
  int max_iteration{0};

  std::size_t size() const { return students.size(); }

  /// Draws a chaos seed away from the logistic map's fixed points and the
  /// preimages that collapse onto them.
  void reseed_chaos() {
    for (;;) {
      const double x = rng.uniform(0.01, 0.99);
      if (std::abs(x - 0.25) > 1e-6 && std::abs(x - 0.5) > 1e-6 && std::abs(x - 0.75) > 1e-6) {
        chaos_state = x;
        return;
      }
    }
  }

  /// One logistic-map step. Reseeds if rounding has landed the orbit on a
  /// fixed point (0 or 3/4), since it would never leave it.
  void advance_chaos() {
    chaos_state = chaos_step(chaos_state);
    if (chaos_state == 0.0 || chaos_state == 0.75) reseed_chaos();
  }
};

inline void check_classroom(const Classroom& c) {
  if (c.size() < 4) throw std::invalid_argument("class needs at least 4 students");
}

/// Contiguous subject blocks over a D-vector: block j = [edges[j], edges[j+1]).
/// With subjects == waypoint count each block is one waypoint's xyz.
inline std::vector<std::size_t> subject_edges(std::size_t dimension, int subjects) {
  if (subjects < 1 || static_cast<std::size_t>(subjects) > std::max<std::size_t>(dimension, 1))
    throw std::invalid_argument("subject count must lie in [1, dimension]");
  std::vector<std::size_t> edges;
  for (int j = 0; j <= subjects; ++j) edges.push_back(dimension * static_cast<std::size_t>(j) / subjects);
  return edges;
}

namespace detail {

/// Scores candidates (in parallel when allowed) and applies
/// accept-if-strictly-better in index order.
inline void accept_improvements(Classroom& c, Evaluator& eval, std::vector<std::vector<double>>& candidates) {
  const auto costs = eval.batch(candidates);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (cost_less(costs[i], c.students[i].cost)) c.students[i] = {std::move(candidates[i]), costs[i]};
  }
}

inline std::vector<double> mean_vector(std::span<const Student> students) {
  std::vector<double> mean(students.front().vector.size(), 0.0);
  for (const auto& s : students) {
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += s.vector[k];
  }
  for (auto& m : mean) m /= static_cast<double>(students.size());
  return mean;
}

inline int partner_other_than(Rng& rng, int n, int exclude_a, int exclude_b = -1) {
  for (;;) {
    const int k = rng.integer(0, n - 1);
    if (k != exclude_a && k != exclude_b) return k;
  }
}

}  // namespace detail

/// Every student moves toward the teacher relative to the class mean.
/// Teacher and mean are fixed at phase start.
inline void teacher_phase(Classroom& c, Evaluator& eval) {
  const auto& teacher = c.students[best_index(c.students)].vector;
  const auto mean = detail::mean_vector(c.students);
  std::vector<std::vector<double>> candidates(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int lambda = c.rng.integer(1, 2);
    auto& cand = candidates[i];
    cand = c.students[i].vector;
    const double w0 = c.rng.uniform();
    for (std::size_t k = 0; k < cand.size(); ++k) cand[k] = teacher_step(cand[k], teacher[k], mean[k], w0, lambda);
    c.bounds.clamp(cand);
  }
  detail::accept_improvements(c, eval, candidates);
}

namespace detail {

/// Scores one candidate and lets it replace student i if strictly better.
inline void accept_one(Classroom& c, Evaluator& eval, std::size_t i, std::vector<double>&& cand) {
  auto cost = eval(cand);
  if (cost_less(cost, c.students[i].cost)) c.students[i] = {std::move(cand), cost};
}

}  // namespace detail

/// Pairwise interaction with two distinct classmates m != n != i. Students
/// learn in index order and an accepted move is visible to later learners.
inline void learner_phase(Classroom& c, Evaluator& eval, LearnerRule rule = LearnerRule::kAbsolute) {
  check_classroom(c);
  const int n = static_cast<int>(c.size());
  for (int i = 0; i < n; ++i) {
    const int a = detail::partner_other_than(c.rng, n, i);
    const int b = detail::partner_other_than(c.rng, n, i, a);
    const double w = c.rng.uniform();
    const auto& sa = c.students[static_cast<std::size_t>(a)];
    const auto& sb = c.students[static_cast<std::size_t>(b)];
    auto cand = c.students[static_cast<std::size_t>(i)].vector;
    if (rule == LearnerRule::kAbsolute) {
      for (std::size_t k = 0; k < cand.size(); ++k) cand[k] = learner_step(cand[k], sa.vector[k], sb.vector[k], w);
    } else {
      const bool a_better = cost_less(sa.cost, sb.cost);
      const auto& better = a_better ? sa.vector : sb.vector;
      const auto& worse = a_better ? sb.vector : sa.vector;
      for (std::size_t k = 0; k < cand.size(); ++k) cand[k] = directed_step(cand[k], better[k], worse[k], w);
    }
    c.bounds.clamp(cand);
    detail::accept_one(c, eval, static_cast<std::size_t>(i), std::move(cand));
  }
}

/// Per subject block j: a fresh partner k != i and weight w_ij. kAbsolute
/// gives block_ij += w_ij * |block_ij - block_kj|; kDirected moves the block
/// toward k if k is the better student and away from k otherwise. The whole
/// vector is accepted only if strictly better, in index order as above.
inline void multi_subject_learner_phase(Classroom& c, Evaluator& eval, LearnerRule rule = LearnerRule::kDirected) {
  check_classroom(c);
  const int n = static_cast<int>(c.size());
  const auto edges = subject_edges(c.bounds.dimension(), c.subjects);
  for (int i = 0; i < n; ++i) {
    const auto& me = c.students[static_cast<std::size_t>(i)];
    auto cand = me.vector;
    for (int j = 0; j < c.subjects; ++j) {
      const int k = detail::partner_other_than(c.rng, n, i);
      const double w = c.rng.uniform();
      const auto& other = c.students[static_cast<std::size_t>(k)];
      const bool toward = cost_less(other.cost, me.cost);
      for (std::size_t d = edges[static_cast<std::size_t>(j)]; d < edges[static_cast<std::size_t>(j) + 1]; ++d) {
        if (rule == LearnerRule::kAbsolute) {
          cand[d] = learner_step(me.vector[d], me.vector[d], other.vector[d], w);
        } else {
          cand[d] = toward ? directed_step(me.vector[d], other.vector[d], me.vector[d], w)
                           : directed_step(me.vector[d], me.vector[d], other.vector[d], w);
        }
      }
    }
    c.bounds.clamp(cand);
    detail::accept_one(c, eval, static_cast<std::size_t>(i), std::move(cand));
  }
}

/// Chaotic mutation of `s`. Each dimension mutates with probability
/// `probability`; a mutating dimension takes z from the current chaos value
/// (scaled by step_scale[k]) and then advances the chaos sequence.
inline Student mutate_student(const Student& s, Classroom& c, Evaluator& eval, double probability,
                              std::span<const double> step_scale) {
  Student out{s.vector, {}};
  for (std::size_t k = 0; k < out.vector.size(); ++k) {
    const double w0 = c.rng.uniform();
    if (w0 < probability) {
      out.vector[k] += mutation_variable(c.chaos_state) * step_scale[k];
      c.advance_chaos();
    }
  }
  c.bounds.clamp(out.vector);
  out.cost = eval(out.vector);
  return out;
}

/// Replaces the worst student with `candidate` iff the candidate is strictly
/// better. Returns whether a replacement happened.
inline bool elite_replace(Classroom& c, const Student& candidate) {
  const auto w = worst_index(c.students);
  if (!cost_less(candidate.cost, c.students[w].cost)) return false;
  c.students[w] = candidate;
  return true;
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

struct TlboParams {
  int population{100};
  int iterations{150};
  std::uint64_t seed{1};
  int threads{1};
  /// When set, iterate until the next iteration would exceed this many
  /// evaluations instead of stopping at `iterations`.
  std::optional<std::int64_t> evaluation_budget;
  /// Replace student 0 of the initial class with the straight start-goal line.
  bool seed_straight_line{false};
  /// Learner rule of plain TLBO.
  LearnerRule learner_rule{LearnerRule::kAbsolute};
};

struct FtlboParams : TlboParams {
  /// Subject blocks for multi-subject learning; 0 means one per waypoint.
  int subjects{0};
  /// Mutation step in meters on every axis; unset means 5% of each axis range.
  std::optional<double> mutation_scale;
  /// Learner rule of the multi-subject phase.
  LearnerRule subject_rule{LearnerRule::kDirected};
};

inline constexpr double kDefaultMutationFraction = 0.05;

/// Evaluations consumed by FTLBO: initial class, then per iteration a
/// teaching pass, one mutant and a learning pass.
inline std::int64_t ftlbo_evaluations(int population, int iterations) {
  return population + static_cast<std::int64_t>(iterations) * (2 * static_cast<std::int64_t>(population) + 1);
}

namespace detail {

inline Classroom make_classroom(Evaluator& eval, const TlboParams& p) {
  require_feasible_endpoints(eval.context());
  if (p.population < 4) throw std::invalid_argument("population must be at least 4");
  if (p.iterations < 0) throw std::invalid_argument("iterations must be nonnegative");
  Classroom c;
  c.bounds = search_bounds(eval.context().scenario);
  c.rng = Rng(p.seed, Rng::kAlgorithm);
  c.students = initial_population(eval, p.population, p.seed, p.seed_straight_line);
  c.max_iteration = p.iterations;
  return c;
}

inline bool budget_allows(const TlboParams& p, int done, std::int64_t used, std::int64_t per_iteration) {
  if (p.evaluation_budget) return used + per_iteration <= *p.evaluation_budget;
  return done < p.iterations;
}

}  // namespace detail

/// Plain TLBO: teaching then learning each iteration.
inline OptimizationResult run_tlbo(const EvaluationContext& ctx, const TlboParams& p) {
  Evaluator eval(ctx, p.threads);
  Classroom c = detail::make_classroom(eval, p);
  OptimizationResult result;
  record_progress(result.record, 0, c.students, eval.evaluations(), result.best);
  const std::int64_t per_iteration = 2 * static_cast<std::int64_t>(c.size());
  int it = 0;
  while (detail::budget_allows(p, it, eval.evaluations(), per_iteration)) {
    ++it;
    c.iteration = it;
    teacher_phase(c, eval);
    learner_phase(c, eval, p.learner_rule);
    record_progress(result.record, it, c.students, eval.evaluations(), result.best);
  }
  return result;
}

/// FTLBO: each iteration advances the chaos sequence, runs the teaching
/// pass, mutates a copy of the current best into the class through elite
/// replacement, then runs multi-subject learning.
inline OptimizationResult run_ftlbo(const EvaluationContext& ctx, const FtlboParams& p) {
  Evaluator eval(ctx, p.threads);
  Classroom c = detail::make_classroom(eval, p);
  c.subjects = p.subjects > 0 ? p.subjects : std::max(ctx.scenario.waypoint_count, 1);
  c.reseed_chaos();

  std::vector<double> step(c.bounds.dimension());
  for (std::size_t k = 0; k < step.size(); ++k)
    step[k] = p.mutation_scale.value_or(kDefaultMutationFraction * c.bounds.range(k));

  OptimizationResult result;
  record_progress(result.record, 0, c.students, eval.evaluations(), result.best);
  const std::int64_t per_iteration = 2 * static_cast<std::int64_t>(c.size()) + 1;
  // The mutation schedule spans the planned iteration count even when a
  // budget stops the loop.
  const int schedule = std::max(p.iterations, 1);
  int it = 0;
  while (detail::budget_allows(p, it, eval.evaluations(), per_iteration)) {
    c.iteration = it;
    ++it;
    c.advance_chaos();
    teacher_phase(c, eval);
    const double mu = mutation_probability(std::min(c.iteration, schedule), schedule);
    const Student mutant = mutate_student(c.students[best_index(c.students)], c, eval, mu, step);
    elite_replace(c, mutant);
    multi_subject_learner_phase(c, eval, p.subject_rule);
    c.iteration = it;
    record_progress(result.record, it, c.students, eval.evaluations(), result.best);
  }
  return result;
}

}  // namespace ftlbo
