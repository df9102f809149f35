// ftlbo: formation path planning CLI (plan / compare / export / validate).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ftlbo/ftlbo.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> pop;
  std::optional<int> iters;
  std::optional<int> subjects;
  std::optional<double> mutation_scale;
  bool strict{false};
  int threads{1};
};

void add_optimizer_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Random seed (first seed for compare)");
  cmd->add_option("--pop", o.pop, "Class / population size")->check(CLI::Range(4, 100000));
  cmd->add_option("--iters", o.iters, "Iterations")->check(CLI::NonNegativeNumber);
  cmd->add_option("--subjects", o.subjects, "Subject blocks for multi-subject learning (0 = per waypoint)");
  cmd->add_option("--mutation-scale", o.mutation_scale, "Mutation step in meters (default 5% of axis range)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--strict-per-uav-safety", o.strict, "Score obstacle violation on every UAV path too");
  cmd->add_option("--threads", o.threads, "Worker threads (results do not depend on this)")->check(CLI::Range(1, 256));
}

void apply(const Overrides& o, ftlbo::ScenarioConfig& cfg) {
  auto& p = cfg.planner;
  if (o.seed) p.seed = *o.seed;
  if (o.pop) p.population = *o.pop;
  if (o.iters) p.iterations = *o.iters;
  if (o.subjects) p.subjects = *o.subjects;
  if (o.mutation_scale) p.mutation_scale = *o.mutation_scale;
  if (o.strict) p.strict_per_uav_safety = true;
}

/// "20" -> first..first+19, "3..7" -> 3..7, "1,5,9" -> as listed.
std::vector<std::uint64_t> parse_seeds(const std::string& spec, std::uint64_t first) {
  std::vector<std::uint64_t> out;
  if (auto dots = spec.find(".."); dots != std::string::npos) {
    const auto lo = std::stoull(spec.substr(0, dots));
    const auto hi = std::stoull(spec.substr(dots + 2));
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  } else if (spec.find(',') != std::string::npos) {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  } else {
    const auto n = std::stoull(spec);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(first + i);
  }
  if (out.empty()) throw std::invalid_argument("no seeds given");
  return out;
}

void print_cost(const ftlbo::CostBreakdown& c) {
  std::printf("  length  %s\n  safety  %s\n  task    %s\n  total   %s\n", ftlbo::format_double(c.length_cost).c_str(),
              ftlbo::format_double(c.safety_cost).c_str(), ftlbo::format_double(c.task_cost).c_str(),
              ftlbo::format_double(c.total).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Formation path planning with teaching-learning-based optimization"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  Overrides ov;

  auto* validate = app.add_subcommand("validate", "Check a scenario config and report formation rules");
  validate->add_option("--scenario", scenario_path, "Scenario config (JSON)")->required();

  auto* plan = app.add_subcommand("plan", "Plan a formation path with FTLBO and write all artifacts");
  plan->add_option("--scenario", scenario_path, "Scenario config (JSON)")->required();
  plan->add_option("--out", out_dir, "Output directory");
  add_optimizer_flags(plan, ov);

  std::string algorithms = "GA,TLBO,THETA_PSO,FTLBO";
  std::string seeds = "20";
  std::string budget = "evaluations";
  auto* compare = app.add_subcommand("compare", "Compare algorithms over several seeds");
  compare->add_option("--scenario", scenario_path, "Scenario config (JSON)")->required();
  compare->add_option("--out", out_dir, "Output directory");
  compare->add_option("--algorithms", algorithms, "Comma list of GA, TLBO, THETA_PSO, FTLBO");
  compare->add_option("--seeds", seeds, "Seed count (from --seed), range a..b, or comma list");
  compare->add_option("--budget", budget, "Stop baselines on FTLBO's evaluation count or its iteration count")
      ->check(CLI::IsMember({"iterations", "evaluations"}));
  add_optimizer_flags(compare, ov);

  std::string path_file;
  auto* exp = app.add_subcommand("export", "Write per-UAV mission files for a centroid path CSV");
  exp->add_option("--scenario", scenario_path, "Scenario config (JSON)")->required();
  exp->add_option("--path", path_file, "Centroid path CSV (as written by plan)")->required();
  exp->add_option("--out", out_dir, "Output directory");
  exp->add_flag("--strict-per-uav-safety", ov.strict, "Score obstacle violation on every UAV path too");

  CLI11_PARSE(app, argc, argv);

  ftlbo::ScenarioConfig cfg;
  try {
    cfg = ftlbo::load_config(read_file(scenario_path));
    apply(ov, cfg);
  } catch (const ftlbo::ScenarioError& e) {
    std::fprintf(stderr, "invalid scenario: %s\n", e.what());
    return ftlbo::kExitBadScenario;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return ftlbo::kExitUsage;
  }

  try {
    if (*validate) {
      const auto& s = cfg.scenario;
      std::printf("scenario ok: %zu obstacles, %d waypoints, band [%g, %g] m\n", s.obstacles.size(), s.waypoint_count,
                  s.h_min, s.h_max);
      std::printf("bounds: (%g, %g, %g) .. (%g, %g, %g)\n", s.lower_bound.x, s.lower_bound.y, s.lower_bound.z,
                  s.upper_bound.x, s.upper_bound.y, s.upper_bound.z);
      const auto rules = ftlbo::check_formation_rules(cfg.formation, 1e-9);
      std::printf("formation: %d UAVs, rules %s\n", cfg.formation.uav_count, rules.passed ? "hold" : "violated");
      for (std::size_t n = 0; n < rules.entries.size(); ++n)
        std::printf("  uav %zu: radial error %g, neighbor mismatch %g\n", n + 1, rules.entries[n].radial_error,
                    rules.entries[n].neighbor_error);
      if (auto k = ftlbo::obstacle_containing(s, s.start)) std::printf("warning: start inside obstacle %zu\n", *k);
      if (auto k = ftlbo::obstacle_containing(s, s.goal)) std::printf("warning: goal inside obstacle %zu\n", *k);
      return ftlbo::kExitOk;
    }

    if (*plan) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto o = ftlbo::plan_to_directory(cfg, out_dir, ov.threads);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::printf("FTLBO seed %llu: %d iterations, %lld evaluations, %.2f s\n",
                  static_cast<unsigned long long>(cfg.planner.seed), o.entry.iterations,
                  static_cast<long long>(o.entry.evaluations), secs);
      print_cost(o.cost);
      for (const auto& f : o.files) std::printf("wrote %s\n", (fs::path(out_dir) / f).string().c_str());
      if (o.exit_code == ftlbo::kExitInfeasible) std::fprintf(stderr, "best path is still infeasible\n");
      return o.exit_code;
    }

    if (*compare) {
      std::vector<ftlbo::Algorithm> algs;
      std::stringstream ss(algorithms);
      std::string tag;
      while (std::getline(ss, tag, ',')) {
        const auto a = ftlbo::parse_algorithm(tag);
        if (!a) {
          std::fprintf(stderr, "unknown algorithm: %s\n", tag.c_str());
          return ftlbo::kExitUsage;
        }
        algs.push_back(*a);
      }
      const auto seed_list = parse_seeds(seeds, cfg.planner.seed);
      const auto mode = budget == "iterations" ? ftlbo::BudgetMode::kIterations : ftlbo::BudgetMode::kEvaluations;
      std::vector<ftlbo::RunEntry> entries;
      const auto summary = ftlbo::compare_to_directory(cfg, algs, seed_list, mode, ov.threads, out_dir, &entries);
      double wall = 0.0;
      for (const auto& e : entries) wall += e.wall_seconds;
      std::printf("%-10s %6s %12s %12s %12s %12s %10s\n", "algorithm", "runs", "min", "median", "max", "initial",
                  "iters");
      for (const auto& r : summary) {
        std::printf("%-10s %6zu %12.4f %12.4f %12.4f %12.4f %10.1f\n",
                    std::string(ftlbo::algorithm_name(r.algorithm)).c_str(), r.runs, r.min_cost, r.median_cost,
                    r.max_cost, r.initial_cost, r.median_iterations);
      }
      std::printf("total run time %.2f s; wrote %s\n", wall, out_dir.c_str());
      return ftlbo::kExitOk;
    }

    if (*exp) {
      if (!cfg.scenario.origin) {
        std::fprintf(stderr, "export needs a geodetic origin (geodetic frame or \"origin\" in the config)\n");
        return ftlbo::kExitUsage;
      }
      const auto nodes = ftlbo::parse_path_csv(read_file(path_file));
      if (nodes.size() < 2) throw std::runtime_error("path needs at least start and goal");
      ftlbo::CentroidPath path{nodes.front(), {nodes.begin() + 1, nodes.end() - 1}, nodes.back()};
      const auto cost = ftlbo::evaluate(path, cfg.context());
      const auto uavs = ftlbo::derive_uav_paths(path, cfg.formation);
      ftlbo::verify_plan(path, uavs, cfg.formation, cfg.scenario, cost);
      if (!cost.feasible()) {
        std::fprintf(stderr, "path is infeasible; no mission files written\n");
        return ftlbo::kExitInfeasible;
      }
      fs::create_directories(out_dir);
      for (const auto& f : ftlbo::write_waypoint_files(out_dir, uavs, *cfg.scenario.origin))
        std::printf("wrote %s\n", (fs::path(out_dir) / f).string().c_str());
      return ftlbo::kExitOk;
    }
  } catch (const ftlbo::InfeasibleScenario& e) {
    std::fprintf(stderr, "infeasible scenario: %s\n", e.what());
    return ftlbo::kExitInfeasible;
  } catch (const ftlbo::ExportError& e) {
    std::fprintf(stderr, "export check failed: %s\n", e.what());
    return ftlbo::kExitExport;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return ftlbo::kExitUsage;
  }
  return ftlbo::kExitUsage;
}
