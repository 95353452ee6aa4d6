#include "kickoff/core/world.hpp"

#include <cmath>

namespace kickoff {

namespace {

constexpr std::array<std::string_view, 10> kRoleNames = {"GK", "CB", "LB", "RB", "DM", "CM", "LM", "RM", "AM", "CF"};

// Formation spots for the Left team; the Right team mirrors them.
constexpr std::array<Vec2, 10> kLeftHomes = {{
    {-0.95, 0.0},   // GK
    {-0.60, 0.0},   // CB
    {-0.55, 0.25},  // LB
    {-0.55, -0.25}, // RB
    {-0.35, 0.0},   // DM
    {-0.15, 0.0},   // CM
    {0.00, 0.25},   // LM
    {0.00, -0.25},  // RM
    {0.20, 0.0},    // AM
    {0.45, 0.0},    // CF
}};

}  // namespace

std::string_view team_name(Team t) { return t == Team::Left ? "left" : "right"; }

std::string_view role_name(Role r) { return kRoleNames[static_cast<std::size_t>(r)]; }

std::optional<Role> role_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kRoleNames.size(); ++i) {
    if (kRoleNames[i] == name) return static_cast<Role>(i);
  }
  return std::nullopt;
}

Vec2 attacking_goal(Team t) { return t == Team::Left ? Vec2{1.0, 0.0} : Vec2{-1.0, 0.0}; }
Vec2 defending_goal(Team t) { return attacking_goal(other(t)); }
Vec2 attack_direction(Team t) { return t == Team::Left ? Vec2{1.0, 0.0} : Vec2{-1.0, 0.0}; }

Vec2 role_home(Team t, Role r) {
  const Vec2 home = kLeftHomes[static_cast<std::size_t>(r)];
  return t == Team::Left ? home : -home;
}

std::string Controller::label() const {
  switch (kind) {
    case Kind::RL:
      return "rl";
    case Kind::Bot:
      return "bot";
    case Kind::Behavior:
      return "behavior:" + behavior;
  }
  return "bot";
}

const PlayerState& WorldState::player(PlayerId id) const {
  if (!has_player(id)) throw UnknownPlayer(id);
  return players[static_cast<std::size_t>(id)];
}

PlayerState& WorldState::player(PlayerId id) {
  if (!has_player(id)) throw UnknownPlayer(id);
  return players[static_cast<std::size_t>(id)];
}

std::optional<PlayerId> WorldState::goalkeeper(Team t) const {
  for (const auto& p : players) {
    if (p.team == t && p.role == Role::GK) return p.id;
  }
  return std::nullopt;
}

std::optional<PlayerId> find_nearest_player(const WorldState& w, Vec2 p, const PlayerFilter& filter) {
  std::optional<PlayerId> best;
  double best_d2 = 0.0;
  for (const auto& pl : w.players) {
    if (!filter(pl)) continue;
    const double d2 = distance_squared(pl.pos, p);
    // Players are visited in ascending id, so strict < keeps the smallest id on ties.
    if (!best || d2 < best_d2) {
      best = pl.id;
      best_d2 = d2;
    }
  }
  return best;
}

PlayerId nearest_player(const WorldState& w, Vec2 p, const PlayerFilter& filter) {
  auto id = find_nearest_player(w, p, filter);
  if (!id) throw EmptyFilter();
  return *id;
}

bool opponent_in_cone(const WorldState& w, PlayerId id, double half_angle, double range) {
  const PlayerState& self = w.player(id);
  for (const auto& other_player : w.players) {
    if (other_player.team == self.team) continue;
    const Vec2 offset = other_player.pos - self.pos;
    const double d = norm(offset);
    if (d > range) continue;
    if (d < 1e-12 || angle_between(self.heading, offset) <= half_angle) return true;
  }
  return false;
}

}  // namespace kickoff
