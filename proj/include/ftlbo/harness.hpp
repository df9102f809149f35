#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ftlbo/baselines.hpp"
#include "ftlbo/config.hpp"
#include "ftlbo/fitness.hpp"
#include "ftlbo/formation.hpp"
#include "ftlbo/optimizer.hpp"
#include "ftlbo/parallel.hpp"

namespace ftlbo {

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

/// Shortest text that reads back to the same double; "inf" for infinity.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/// JSON cannot hold infinity; infeasible costs are written as null.
inline nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline nlohmann::json to_json(const CostBreakdown& c) {
  return {{"length_cost", json_number(c.length_cost)},
          {"safety_cost", json_number(c.safety_cost)},
          {"task_cost", json_number(c.task_cost)},
          {"total", json_number(c.total)},
          {"feasible", c.feasible()}};
}

inline std::string convergence_csv(const ConvergenceRecord& rec) {
  std::string out = "iteration,evaluations,best_total,mean_total\n";
  for (const auto& e : rec.entries) {
    out += std::to_string(e.iteration) + "," + std::to_string(e.evaluations) + "," + format_double(e.best_total) +
           "," + format_double(e.mean_total) + "\n";
  }
  return out;
}

inline std::string path_csv(std::span<const LocalPoint> nodes) {
  std::string out = "node,x,y,z\n";
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    out += std::to_string(j) + "," + format_double(nodes[j].x) + "," + format_double(nodes[j].y) + "," +
           format_double(nodes[j].z) + "\n";
  }
  return out;
}

/// Reads a file produced by path_csv.
inline std::vector<LocalPoint> parse_path_csv(std::string_view text) {
  std::vector<LocalPoint> nodes;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("node", 0) == 0) continue;
    }
    std::size_t idx = 0;
    double x = 0, y = 0, z = 0;
    if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf", &idx, &x, &y, &z) != 4)
      throw std::runtime_error("malformed path row: " + line);
    if (idx != nodes.size()) throw std::runtime_error("path rows out of order at: " + line);
    nodes.push_back({x, y, z});
  }
  return nodes;
}

// ---------------------------------------------------------------------------
// Mission waypoint export
// ---------------------------------------------------------------------------

/// MAVLink frame / command codes used in QGC WPL 110 mission files.
inline constexpr int kFrameGlobalRelativeAlt = 3;
inline constexpr int kCommandNavWaypoint = 16;

/// Tab-separated mission file, one line per node after the "QGC WPL 110"
/// header. Item 0 is the start location and is marked current.
inline std::string export_waypoints(const UavPath& path, const GeoPoint& origin,
                                    int command = kCommandNavWaypoint) {
  std::string out = "QGC WPL 110\n";
  char line[256];
  for (std::size_t seq = 0; seq < path.nodes.size(); ++seq) {
    const auto& node = path.nodes[seq];
    const GeoPoint g = local_to_geo(origin, node);
    std::snprintf(line, sizeof line, "%zu\t%d\t%d\t%d\t%.8f\t%.8f\t%.8f\t%.8f\t%.10f\t%.10f\t%.6f\t%d\n", seq,
                  seq == 0 ? 1 : 0, kFrameGlobalRelativeAlt, command, 0.0, 0.0, 0.0, 0.0, g.latitude, g.longitude,
                  node.z, 1);
    out += line;
  }
  return out;
}

/// Closed-form disk test used to re-verify emitted plans, independent of the
/// distance routine inside the cost function: solves |a + t(b-a) - c|^2 = r^2
/// and reports whether any t in [0, 1] lies within the closed disk.
inline bool segment_touches_disk(const LocalPoint& a, const LocalPoint& b, const LocalPoint& c, double r) {
  const double fx = a.x - c.x;
  const double fy = a.y - c.y;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double qa = dx * dx + dy * dy;
  const double qb = 2.0 * (fx * dx + fy * dy);
  const double qc = fx * fx + fy * fy - r * r;
  if (qc <= 0.0) return true;  // a is inside
  if (qa == 0.0) return false;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return false;
  const double sq = std::sqrt(disc);
  const double t1 = (-qb - sq) / (2.0 * qa);
  const double t2 = (-qb + sq) / (2.0 * qa);
  return (t1 >= 0.0 && t1 <= 1.0) || (t2 >= 0.0 && t2 <= 1.0) || (t1 < 0.0 && t2 > 1.0);
}

/// Number of (segment, obstacle) pairs whose segment enters the obstacle disk.
inline std::size_t count_obstacle_contacts(std::span<const LocalPoint> nodes, std::span<const Obstacle> obstacles) {
  std::size_t hits = 0;
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    for (const auto& o : obstacles) {
      if (segment_touches_disk(nodes[j], nodes[j + 1], o.center, o.radius)) ++hits;
    }
  }
  return hits;
}

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Re-checks an emitted plan: every UAV node equals centroid node + offset
/// and, for a feasible cost, no centroid segment touches an obstacle disk.
inline void verify_plan(const CentroidPath& path, std::span<const UavPath> uavs, const FormationSpec& spec,
                        const Scenario& s, const CostBreakdown& cost) {
  const auto nodes = path.nodes();
  if (uavs.size() != spec.offsets.size()) throw ExportError("UAV path count does not match the formation");
  for (std::size_t n = 0; n < uavs.size(); ++n) {
    if (uavs[n].nodes.size() != nodes.size()) throw ExportError("UAV path length mismatch");
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (!(uavs[n].nodes[j] == nodes[j] + spec.offsets[n]))
        throw ExportError("UAV " + std::to_string(n + 1) + " node " + std::to_string(j) + " breaks the offset rule");
    }
  }
  if (cost.feasible() && count_obstacle_contacts(nodes, s.obstacles) != 0)
    throw ExportError("plan reported feasible but a segment enters an obstacle disk");
}

// ---------------------------------------------------------------------------
// Algorithms and reports
// ---------------------------------------------------------------------------

enum class Algorithm { kGa, kTlbo, kThetaPso, kFtlbo };

inline std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kGa: return "GA";
    case Algorithm::kTlbo: return "TLBO";
    case Algorithm::kThetaPso: return "THETA_PSO";
    case Algorithm::kFtlbo: return "FTLBO";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view tag) {
  std::string t;
  for (char ch : tag) t += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (t == "GA") return Algorithm::kGa;
  if (t == "TLBO") return Algorithm::kTlbo;
  if (t == "THETA_PSO" || t == "PSO") return Algorithm::kThetaPso;
  if (t == "FTLBO") return Algorithm::kFtlbo;
  return std::nullopt;
}

enum class BudgetMode { kIterations, kEvaluations };

/// Runs one algorithm. In evaluation mode every algorithm other than FTLBO
/// stops at FTLBO's evaluation count for the same population/iterations.
inline OptimizationResult run_algorithm(Algorithm alg, const EvaluationContext& ctx, const PlannerSettings& s,
                                        std::uint64_t seed, BudgetMode budget, int threads) {
  std::optional<std::int64_t> limit;
  if (budget == BudgetMode::kEvaluations && alg != Algorithm::kFtlbo)
    limit = ftlbo_evaluations(s.population, s.iterations);
  switch (alg) {
    case Algorithm::kFtlbo: {
      FtlboParams p;
      p.population = s.population;
      p.iterations = s.iterations;
      p.seed = seed;
      p.threads = threads;
      p.subjects = s.subjects;
      p.mutation_scale = s.mutation_scale;
      p.seed_straight_line = s.seed_straight_line;
      p.subject_rule = s.subject_rule;
      return run_ftlbo(ctx, p);
    }
    case Algorithm::kTlbo: {
      TlboParams p;
      p.population = s.population;
      p.iterations = s.iterations;
      p.seed = seed;
      p.threads = threads;
      p.evaluation_budget = limit;
      p.seed_straight_line = s.seed_straight_line;
      p.learner_rule = s.tlbo_learner_rule;
      return run_tlbo(ctx, p);
    }
    case Algorithm::kGa:
    case Algorithm::kThetaPso: {
      BaselineParams p = s.baseline;
      p.algorithm = alg == Algorithm::kGa ? BaselineAlgorithm::kGa : BaselineAlgorithm::kThetaPso;
      p.population = s.population;
      p.iterations = s.iterations;
      p.seed = seed;
      p.threads = threads;
      p.evaluation_budget = limit;
      return alg == Algorithm::kGa ? run_ga(ctx, p) : run_theta_pso(ctx, p);
    }
  }
  throw std::logic_error("unknown algorithm");
}

/// First iteration whose best cost is within `fraction` of the final best.
inline int iterations_to_within(const ConvergenceRecord& rec, double fraction = 0.01) {
  if (rec.entries.empty()) return 0;
  const double final_best = rec.entries.back().best_total;
  for (const auto& e : rec.entries) {
    if (e.best_total <= final_best * (1.0 + fraction)) return e.iteration;
  }
  return rec.entries.back().iteration;
}

struct RunEntry {
  Algorithm algorithm{Algorithm::kFtlbo};
  std::uint64_t seed{0};
  CostBreakdown final_cost;
  double initial_best{0.0};
  int iterations{0};
  int iterations_to_1pct{0};
  std::int64_t evaluations{0};
  double wall_seconds{0.0};  // console only; kept out of files
  ConvergenceRecord record;
  std::vector<double> best_vector;
};

inline RunEntry make_entry(Algorithm alg, std::uint64_t seed, const OptimizationResult& r) {
  RunEntry e;
  e.algorithm = alg;
  e.seed = seed;
  e.final_cost = r.best.cost;
  e.initial_best = r.record.entries.front().best_total;
  e.iterations = r.record.entries.back().iteration;
  e.iterations_to_1pct = iterations_to_within(r.record);
  e.evaluations = r.record.entries.back().evaluations;
  e.record = r.record;
  e.best_vector = r.best.vector;
  return e;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct AlgorithmSummary {
  Algorithm algorithm{Algorithm::kFtlbo};
  std::size_t runs{0};
  double min_cost{0.0};
  double median_cost{0.0};
  double max_cost{0.0};
  double initial_cost{0.0};  // median iteration-0 best
  double median_iterations{0.0};
};

inline std::vector<AlgorithmSummary> summarize(std::span<const RunEntry> entries, std::span<const Algorithm> order) {
  std::vector<AlgorithmSummary> out;
  for (Algorithm alg : order) {
    std::vector<double> finals, initials, iters;
    for (const auto& e : entries) {
      if (e.algorithm != alg) continue;
      finals.push_back(e.final_cost.total);
      initials.push_back(e.initial_best);
      iters.push_back(e.iterations_to_1pct);
    }
    if (finals.empty()) continue;
    out.push_back({alg, finals.size(), *std::min_element(finals.begin(), finals.end()), median(finals),
                   *std::max_element(finals.begin(), finals.end()), median(initials), median(iters)});
  }
  return out;
}

inline std::string summary_csv(std::span<const AlgorithmSummary> rows) {
  std::string out = "algorithm,runs,min_cost,median_cost,max_cost,initial_cost,iterations\n";
  for (const auto& r : rows) {
    out += std::string(algorithm_name(r.algorithm)) + "," + std::to_string(r.runs) + "," + format_double(r.min_cost) +
           "," + format_double(r.median_cost) + "," + format_double(r.max_cost) + "," +
           format_double(r.initial_cost) + "," + format_double(r.median_iterations) + "\n";
  }
  return out;
}

/// 64-bit FNV-1a of the canonical config text, as 16 hex digits.
inline std::string scenario_digest(const nlohmann::json& source) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : source.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline nlohmann::json run_report(const ScenarioConfig& cfg, std::span<const RunEntry> entries,
                                 std::span<const AlgorithmSummary> summary, BudgetMode budget) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& e : entries) {
    runs.push_back({{"algorithm", algorithm_name(e.algorithm)},
                    {"seed", e.seed},
                    {"final", to_json(e.final_cost)},
                    {"initial_best", json_number(e.initial_best)},
                    {"iterations", e.iterations},
                    {"iterations_to_1pct", e.iterations_to_1pct},
                    {"evaluations", e.evaluations}});
  }
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& s : summary) {
    stats.push_back({{"algorithm", algorithm_name(s.algorithm)},
                     {"runs", s.runs},
                     {"min_cost", json_number(s.min_cost)},
                     {"median_cost", json_number(s.median_cost)},
                     {"max_cost", json_number(s.max_cost)},
                     {"initial_cost", json_number(s.initial_cost)},
                     {"median_iterations_to_1pct", s.median_iterations}});
  }
  return {{"scenario_digest", scenario_digest(cfg.source)},
          {"budget", budget == BudgetMode::kEvaluations ? "evaluations" : "iterations"},
          {"population", cfg.planner.population},
          {"iterations", cfg.planner.iterations},
          {"runs", runs},
          {"statistics", stats},
          {"config", cfg.source}};
}

/// Runs every (algorithm, seed) pair. Runs are spread over `threads`; results
/// come back in (algorithm, seed) order regardless.
inline std::vector<RunEntry> run_comparison(const ScenarioConfig& cfg, std::span<const Algorithm> algorithms,
                                            std::span<const std::uint64_t> seeds, BudgetMode budget, int threads) {
  const auto ctx = cfg.context();
  require_feasible_endpoints(ctx);
  std::vector<std::pair<Algorithm, std::uint64_t>> jobs;
  for (auto a : algorithms) {
    for (auto s : seeds) jobs.emplace_back(a, s);
  }
  std::vector<RunEntry> out(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const auto [alg, seed] = jobs[i];
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_algorithm(alg, ctx, cfg.planner, seed, budget, 1);
    out[i] = make_entry(alg, seed, r);
    out[i].wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  return out;
}

// ---------------------------------------------------------------------------
// Output directories
// ---------------------------------------------------------------------------

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitBadScenario = 2, kExitInfeasible = 3, kExitExport = 4 };

inline void write_text(const std::filesystem::path& file, std::string_view text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing " + file.string());
}

struct PlanOutcome {
  int exit_code{kExitOk};
  CostBreakdown cost;
  CentroidPath path;
  std::vector<UavPath> uav_paths;
  RunEntry entry;
  std::vector<std::string> files;
};

inline nlohmann::json formation_json(const FormationSpec& spec) {
  nlohmann::json offsets = nlohmann::json::array();
  for (const auto& o : spec.offsets) offsets.push_back({o.x, o.y, o.z});
  const auto rules = check_formation_rules(spec, 1e-9);
  return {{"uav_count", spec.uav_count}, {"offsets", offsets}, {"rules_hold", rules.passed}};
}

/// Writes one mission file per UAV; requires a geodetic origin.
inline std::vector<std::string> write_waypoint_files(const std::filesystem::path& out_dir,
                                                     std::span<const UavPath> uavs, const GeoPoint& origin) {
  std::vector<std::string> files;
  for (const auto& u : uavs) {
    const std::string name = "uav_" + std::to_string(u.uav_index) + ".waypoints";
    write_text(out_dir / name, export_waypoints(u, origin));
    files.push_back(name);
  }
  return files;
}

/// Plans with FTLBO and writes the centroid path, per-UAV paths, the
/// convergence CSV, a JSON report and (when the plan is feasible and the
/// scenario is geodetic) one mission file per UAV.
///
/// Throws InfeasibleScenario before writing anything if an endpoint lies in
/// an obstacle.
inline PlanOutcome plan_to_directory(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, int threads) {
  const auto ctx = cfg.context();
  require_feasible_endpoints(ctx);
  const auto result =
      run_algorithm(Algorithm::kFtlbo, ctx, cfg.planner, cfg.planner.seed, BudgetMode::kIterations, threads);

  PlanOutcome o;
  o.cost = result.best.cost;
  o.entry = make_entry(Algorithm::kFtlbo, cfg.planner.seed, result);
  o.path = path_from_vector(cfg.scenario, result.best.vector);
  o.uav_paths = derive_uav_paths(o.path, cfg.formation);

  std::filesystem::create_directories(out_dir);
  const auto nodes = o.path.nodes();
  write_text(out_dir / "centroid_path.csv", path_csv(nodes));
  o.files.push_back("centroid_path.csv");
  for (const auto& u : o.uav_paths) {
    const std::string name = "uav_" + std::to_string(u.uav_index) + "_path.csv";
    write_text(out_dir / name, path_csv(u.nodes));
    o.files.push_back(name);
  }
  write_text(out_dir / "convergence.csv", convergence_csv(result.record));
  o.files.push_back("convergence.csv");

  nlohmann::json report = {{"scenario_digest", scenario_digest(cfg.source)},
                           {"algorithm", "FTLBO"},
                           {"seed", cfg.planner.seed},
                           {"cost", to_json(o.cost)},
                           {"iterations", o.entry.iterations},
                           {"iterations_to_1pct", o.entry.iterations_to_1pct},
                           {"evaluations", o.entry.evaluations},
                           {"formation", formation_json(cfg.formation)},
                           {"config", cfg.source}};
  write_text(out_dir / "report.json", report.dump(2) + "\n");
  o.files.push_back("report.json");

  if (!o.cost.feasible()) {
    o.exit_code = kExitInfeasible;
    return o;
  }
  verify_plan(o.path, o.uav_paths, cfg.formation, cfg.scenario, o.cost);
  if (cfg.scenario.origin) {
    for (auto& f : write_waypoint_files(out_dir, o.uav_paths, *cfg.scenario.origin)) o.files.push_back(std::move(f));
  }
  return o;
}

/// Runs the comparison and writes report.json, summary.csv and one
/// convergence CSV per (algorithm, seed).
inline std::vector<AlgorithmSummary> compare_to_directory(const ScenarioConfig& cfg,
                                                          std::span<const Algorithm> algorithms,
                                                          std::span<const std::uint64_t> seeds, BudgetMode budget,
                                                          int threads, const std::filesystem::path& out_dir,
                                                          std::vector<RunEntry>* entries_out = nullptr) {
  auto entries = run_comparison(cfg, algorithms, seeds, budget, threads);
  const auto summary = summarize(entries, algorithms);
  std::filesystem::create_directories(out_dir);
  for (const auto& e : entries) {
    write_text(out_dir / ("convergence_" + std::string(algorithm_name(e.algorithm)) + "_seed" +
                          std::to_string(e.seed) + ".csv"),
               convergence_csv(e.record));
  }
  write_text(out_dir / "summary.csv", summary_csv(summary));
  write_text(out_dir / "report.json", run_report(cfg, entries, summary, budget).dump(2) + "\n");
  if (entries_out) *entries_out = std::move(entries);
  return summary;
}

}  // namespace ftlbo
