#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace kickoff {

/// Planar coordinate on the pitch. x runs goal to goal (half-length 1.0),
/// y runs touchline to touchline (half-width 0.42). +x points at the Right
/// goal, +y points North on the bird's-eye view.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
constexpr double distance_squared(Vec2 a, Vec2 b) { return dot(a - b, a - b); }

/// Counter-clockwise perpendicular: the "left" side when facing along v.
constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

/// Unit vector along v, or `fallback` when v is (numerically) zero.
inline Vec2 normalized(Vec2 v, Vec2 fallback = {1.0, 0.0}) {
  const double n = norm(v);
  if (n < 1e-12) return fallback;
  return v / n;
}

inline Vec2 rotated(Vec2 v, double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Unsigned angle between two non-zero vectors, in [0, pi].
inline double angle_between(Vec2 a, Vec2 b) {
  return std::abs(std::atan2(cross(a, b), dot(a, b)));
}

/// Distance from p to the closed segment [a, b].
inline double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 < 1e-18) return distance(p, a);
  double t = dot(p - a, ab) / len2;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return distance(p, a + ab * t);
}

enum class Compass { N, NE, E, SE, S, SW, W, NW };

inline constexpr std::array<Compass, 8> kAllCompass = {Compass::N, Compass::NE, Compass::E, Compass::SE,
                                                       Compass::S, Compass::SW, Compass::W, Compass::NW};

Vec2 direction_vector(Compass c);
Compass opposite(Compass c);
std::string_view compass_name(Compass c);
std::optional<Compass> compass_from_name(std::string_view name);
/// The compass direction whose vector has the smallest angle to v.
Compass nearest_compass(Vec2 v);

struct RectRegion {
  Vec2 min;
  Vec2 max;
  friend bool operator==(const RectRegion&, const RectRegion&) = default;
};

struct CircleRegion {
  Vec2 center;
  double radius = 0.0;
  friend bool operator==(const CircleRegion&, const CircleRegion&) = default;
};

/// Closed planar region (boundary points are members).
using Region = std::variant<RectRegion, CircleRegion>;

bool region_contains(const Region& r, Vec2 p);
bool region_well_formed(const Region& r);

struct FieldSpec {
  double x_half = 1.0;
  double y_half = 0.42;
  double goal_mouth_half = 0.044;
  std::map<std::string, Region, std::less<>> named_regions;

  /// The standard pitch with the documented named regions.
  static const FieldSpec& standard();

  const Region* find_region(std::string_view name) const;
  Vec2 clamp(Vec2 p) const;
  bool in_bounds(Vec2 p, double margin = 0.0) const;
};

}  // namespace kickoff
