#include "kickoff/core/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace kickoff {

namespace {

constexpr double kDiag = std::numbers::sqrt2 / 2.0;

constexpr std::array<Vec2, 8> kDirections = {{
    {0.0, 1.0},       // N
    {kDiag, kDiag},   // NE
    {1.0, 0.0},       // E
    {kDiag, -kDiag},  // SE
    {0.0, -1.0},      // S
    {-kDiag, -kDiag}, // SW
    {-1.0, 0.0},      // W
    {-kDiag, kDiag},  // NW
}};

constexpr std::array<std::string_view, 8> kCompassNames = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};

}  // namespace

Vec2 direction_vector(Compass c) { return kDirections[static_cast<std::size_t>(c)]; }

Compass opposite(Compass c) { return static_cast<Compass>((static_cast<int>(c) + 4) % 8); }

std::string_view compass_name(Compass c) { return kCompassNames[static_cast<std::size_t>(c)]; }

std::optional<Compass> compass_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kCompassNames.size(); ++i) {
    if (kCompassNames[i] == name) return static_cast<Compass>(i);
  }
  return std::nullopt;
}

Compass nearest_compass(Vec2 v) {
  Compass best = Compass::E;
  double best_dot = -2.0;
  const Vec2 u = normalized(v);
  for (Compass c : kAllCompass) {
    const double d = dot(u, direction_vector(c));
    if (d > best_dot + 1e-12) {
      best_dot = d;
      best = c;
    }
  }
  return best;
}

bool region_contains(const Region& r, Vec2 p) {
  if (const auto* rect = std::get_if<RectRegion>(&r)) {
    return p.x >= rect->min.x && p.x <= rect->max.x && p.y >= rect->min.y && p.y <= rect->max.y;
  }
  const auto& circle = std::get<CircleRegion>(r);
  return distance_squared(p, circle.center) <= circle.radius * circle.radius;
}

bool region_well_formed(const Region& r) {
  if (const auto* rect = std::get_if<RectRegion>(&r)) {
    return rect->min.x <= rect->max.x && rect->min.y <= rect->max.y;
  }
  return std::get<CircleRegion>(r).radius >= 0.0;
}

const FieldSpec& FieldSpec::standard() {
  static const FieldSpec spec = [] {
    FieldSpec f;
    f.named_regions.emplace("left_penalty_box", RectRegion{{-1.0, -0.3}, {-0.7, 0.3}});
    f.named_regions.emplace("right_penalty_box", RectRegion{{0.7, -0.3}, {1.0, 0.3}});
    f.named_regions.emplace("left_goal_area", RectRegion{{-1.0, -0.12}, {-0.9, 0.12}});
    f.named_regions.emplace("right_goal_area", RectRegion{{0.9, -0.12}, {1.0, 0.12}});
    f.named_regions.emplace("left_half", RectRegion{{-1.0, -0.42}, {0.0, 0.42}});
    f.named_regions.emplace("right_half", RectRegion{{0.0, -0.42}, {1.0, 0.42}});
    f.named_regions.emplace("center_circle", CircleRegion{{0.0, 0.0}, 0.174});
    f.named_regions.emplace("field", RectRegion{{-1.0, -0.42}, {1.0, 0.42}});
    return f;
  }();
  return spec;
}

const Region* FieldSpec::find_region(std::string_view name) const {
  auto it = named_regions.find(name);
  return it == named_regions.end() ? nullptr : &it->second;
}

Vec2 FieldSpec::clamp(Vec2 p) const {
  return {std::clamp(p.x, -x_half, x_half), std::clamp(p.y, -y_half, y_half)};
}

bool FieldSpec::in_bounds(Vec2 p, double margin) const {
  return std::abs(p.x) <= x_half + margin && std::abs(p.y) <= y_half + margin;
}

}  // namespace kickoff
