#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ftlbo/geometry.hpp"

namespace ftlbo {

/// Per-UAV offsets from the formation centroid, constant in the local frame.
struct FormationSpec {
  int uav_count{0};
  std::vector<Vec3> offsets;
  std::optional<double> radius;
};

/// Centroid trajectory: start, `waypoints`, goal.
struct CentroidPath {
  LocalPoint start;
  std::vector<LocalPoint> waypoints;
  LocalPoint goal;

  std::size_t node_count() const { return waypoints.size() + 2; }

  std::vector<LocalPoint> nodes() const {
    std::vector<LocalPoint> out;
    out.reserve(node_count());
    out.push_back(start);
    out.insert(out.end(), waypoints.begin(), waypoints.end());
    out.push_back(goal);
    return out;
  }
};

struct UavPath {
  int uav_index{1};  // 1-based
  std::vector<LocalPoint> nodes;
};

inline LocalPoint centroid(std::span<const LocalPoint> positions) {
  if (positions.empty()) throw std::invalid_argument("centroid of an empty set");
  Vec3 sum;
  for (const auto& p : positions) sum += p;
  return sum * (1.0 / static_cast<double>(positions.size()));
}

/// Builds N offsets on a circle of `radius` in the plane orthogonal to
/// `plane_normal`, equally spaced, with the first one pointing "up".
///
/// "Up" is the projection of +z onto the plane; when the normal is vertical
/// the projection of +y is used instead. Successive offsets advance toward
/// `up x normal` (for a +y normal: +z, then -x, then +x side).
inline FormationSpec regular_offsets(int uav_count, double radius, Vec3 plane_normal) {
  if (uav_count < 2) throw std::invalid_argument("regular formation needs at least 2 UAVs");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("formation radius must be positive");
  const double nlen = norm(plane_normal);
  if (!(nlen > 0.0) || !std::isfinite(nlen)) throw std::invalid_argument("zero plane normal");
  const Vec3 n = plane_normal * (1.0 / nlen);

  auto project = [&](Vec3 v) { return v - n * dot(v, n); };
  Vec3 up = project({0.0, 0.0, 1.0});
  if (norm(up) < 1e-9) up = project({0.0, 1.0, 0.0});
  up = up * (1.0 / norm(up));
  const Vec3 side = cross(up, n);

  FormationSpec spec;
  spec.uav_count = uav_count;
  spec.radius = radius;
  spec.offsets.reserve(static_cast<std::size_t>(uav_count));
  for (int k = 0; k < uav_count; ++k) {
    const double a = 2.0 * std::numbers::pi * k / uav_count;
    spec.offsets.push_back(radius * (std::cos(a) * up + std::sin(a) * side));
  }
  return spec;
}

struct FormationRuleReport {
  struct Entry {
    double radial_error;    // |d_n - r_F|
    double neighbor_error;  // | |P_n - P_prev| - |P_n - P_next| |
  };
  double reference_radius{0.0};
  std::vector<Entry> entries;
  bool passed{true};
};

/// Checks equal distance to the planned centroid (d_n = |offset_n|) and equal
/// distance to both adjacent neighbors (ring order = offset order). Without an
/// explicit radius the reference is the first UAV's distance.
inline FormationRuleReport check_formation_rules(const FormationSpec& spec, double tol) {
  FormationRuleReport report;
  const auto n = spec.offsets.size();
  if (n == 0) return report;
  report.reference_radius = spec.radius.value_or(norm(spec.offsets.front()));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = spec.offsets[i];
    const Vec3& prev = spec.offsets[(i + n - 1) % n];
    const Vec3& next = spec.offsets[(i + 1) % n];
    FormationRuleReport::Entry e{std::abs(norm(p) - report.reference_radius),
                                 std::abs(distance(p, prev) - distance(p, next))};
    if (e.radial_error > tol || e.neighbor_error > tol) report.passed = false;
    report.entries.push_back(e);
  }
  return report;
}

inline std::vector<UavPath> derive_uav_paths(const CentroidPath& path, const FormationSpec& spec) {
  const auto nodes = path.nodes();
  std::vector<UavPath> out;
  out.reserve(spec.offsets.size());
  for (std::size_t n = 0; n < spec.offsets.size(); ++n) {
    UavPath p{static_cast<int>(n) + 1, {}};
    p.nodes.reserve(nodes.size());
    for (const auto& c : nodes) p.nodes.push_back(c + spec.offsets[n]);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace ftlbo
