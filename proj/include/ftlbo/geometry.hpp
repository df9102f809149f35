#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ftlbo {

/// Cartesian 3-vector in the local metric frame (x east, y north, z up), meters.
struct Vec3 {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

using LocalPoint = Vec3;

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline double distance(const Vec3& a, const Vec3& b) { return norm(b - a); }

inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Distance in the x-y plane from point `p` to segment [a, b]; z is ignored.
/// A degenerate segment (a == b in x-y) is treated as a point.
inline double horizontal_segment_distance(const Vec3& a, const Vec3& b, const Vec3& p) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double cx = a.x + t * dx - p.x;
  const double cy = a.y + t * dy - p.y;
  return std::hypot(cx, cy);
}

// ---------------------------------------------------------------------------
// Geodetic <-> local tangent plane
// ---------------------------------------------------------------------------

inline constexpr double kEarthRadius = 6371000.0;  // mean radius, meters
inline constexpr double kMaxLocalExtent = 112000.0;  // meters, just over one degree of latitude

struct GeoPoint {
  double latitude{0.0};   // degrees, WGS-84
  double longitude{0.0};  // degrees, WGS-84

  friend constexpr bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

class GeoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_valid(const GeoPoint& g) {
  return std::isfinite(g.latitude) && std::isfinite(g.longitude) && g.latitude >= -90.0 &&
         g.latitude <= 90.0 && g.longitude >= -180.0 && g.longitude <= 180.0;
}

namespace detail {
inline constexpr double kDegToRad = std::numbers::pi / 180.0;

inline double wrapped_delta_lon(double from, double to) {
  double d = to - from;
  if (d > 180.0) d -= 360.0;
  if (d < -180.0) d += 360.0;
  return d;
}
}  // namespace detail

/// Equirectangular projection of `p` into the tangent plane at `origin`.
/// Throws GeoError for invalid points or when the pair is too far apart for
/// the flat-earth approximation.
inline LocalPoint geo_to_local(const GeoPoint& origin, const GeoPoint& p) {
  if (!is_valid(origin)) throw GeoError("origin is not a valid geodetic point");
  if (!is_valid(p)) throw GeoError("point is not a valid geodetic point");
  const double dlat = p.latitude - origin.latitude;
  const double dlon = detail::wrapped_delta_lon(origin.longitude, p.longitude);
  if (std::abs(dlat) > 1.0) throw GeoError("points too far apart for local-plane projection");
  const LocalPoint out{kEarthRadius * dlon * detail::kDegToRad *
                           std::cos(origin.latitude * detail::kDegToRad),
                       kEarthRadius * dlat * detail::kDegToRad, 0.0};
  if (std::abs(out.x) > kMaxLocalExtent || std::abs(out.y) > kMaxLocalExtent)
    throw GeoError("points too far apart for local-plane projection");
  return out;
}

/// Inverse of geo_to_local; the z component is dropped.
inline GeoPoint local_to_geo(const GeoPoint& origin, const LocalPoint& p) {
  if (!is_valid(origin)) throw GeoError("origin is not a valid geodetic point");
  const double coslat = std::cos(origin.latitude * detail::kDegToRad);
  if (coslat <= 0.0) throw GeoError("origin at a pole has no east axis");
  GeoPoint g{origin.latitude + p.y / kEarthRadius / detail::kDegToRad,
             origin.longitude + p.x / (kEarthRadius * coslat) / detail::kDegToRad};
  if (g.longitude > 180.0) g.longitude -= 360.0;
  if (g.longitude < -180.0) g.longitude += 360.0;
  if (!is_valid(g)) throw GeoError("local point decodes outside valid latitude/longitude");
  return g;
}

}  // namespace ftlbo
