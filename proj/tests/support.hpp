#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ftlbo/ftlbo.hpp"

namespace support {

inline std::filesystem::path source_dir() { return FTLBO_SOURCE_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ftlbo::ScenarioConfig load(const std::string& name) {
  return ftlbo::load_config(read_file(source_dir() / "scenarios" / name));
}

/// 100 x 60 x 10 box, start (10,10,4), goal (90,50,4), band [2,7], no
/// obstacles, one UAV at the centroid.
inline ftlbo::Scenario open_box(int waypoints = 10) {
  ftlbo::Scenario s;
  s.lower_bound = {0, 0, 0};
  s.upper_bound = {100, 60, 10};
  s.start = {10, 10, 4};
  s.goal = {90, 50, 4};
  s.h_min = 2;
  s.h_max = 7;
  s.waypoint_count = waypoints;
  return s;
}

inline ftlbo::FormationSpec single_uav() { return {1, {ftlbo::Vec3{}}, std::nullopt}; }

inline ftlbo::FormationSpec survey_offsets() { return {3, {{0, 0, 2}, {3, 0, -1}, {-3, 0, -1}}, std::nullopt}; }

/// Scratch directory under the build tree, emptied on creation.
inline std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ftlbo_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace support
