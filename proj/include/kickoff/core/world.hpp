#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kickoff/core/errors.hpp"
#include "kickoff/core/geometry.hpp"

namespace kickoff {

using PlayerId = int;

/// Left is the yellow team and the default RL side; it attacks +x.
enum class Team { Left, Right };

enum class Role { GK, CB, LB, RB, DM, CM, LM, RM, AM, CF };

inline constexpr std::array<Role, 10> kAllRoles = {Role::GK, Role::CB, Role::LB, Role::RB, Role::DM,
                                                   Role::CM, Role::LM, Role::RM, Role::AM, Role::CF};

constexpr Team other(Team t) { return t == Team::Left ? Team::Right : Team::Left; }
std::string_view team_name(Team t);  // "left" / "right"
std::string_view role_name(Role r);  // "GK" ...
std::optional<Role> role_from_name(std::string_view name);

/// Centre of the goal a team attacks.
Vec2 attacking_goal(Team t);
/// Centre of the goal a team defends.
Vec2 defending_goal(Team t);
/// Unit vector pointing from own goal toward the opponent's.
Vec2 attack_direction(Team t);

/// Nominal formation spot of a role for a team (Left values mirrored through
/// the centre spot for Right).
Vec2 role_home(Team t, Role r);

struct Controller {
  enum class Kind { RL, Behavior, Bot };
  Kind kind = Kind::Bot;
  std::string behavior;  // set when kind == Behavior

  static Controller rl() { return {Kind::RL, {}}; }
  static Controller bot() { return {Kind::Bot, {}}; }
  static Controller scripted(std::string name) { return {Kind::Behavior, std::move(name)}; }

  /// "rl", "bot" or "behavior:<name>".
  std::string label() const;
  friend bool operator==(const Controller&, const Controller&) = default;
};

struct PlayerState {
  PlayerId id = 0;
  Team team = Team::Left;
  Role role = Role::CM;
  Vec2 pos;
  Vec2 heading{1.0, 0.0};
  bool sprinting = false;
  bool dribbling = false;
  int slide_cooldown = 0;
  Controller controller;

  friend bool operator==(const PlayerState&, const PlayerState&) = default;
};

struct BallState {
  Vec2 pos;
  double height = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double vz = 0.0;
  std::optional<PlayerId> owner;
  /// Last player to release the ball and the ticks during which it may not
  /// re-capture its own kick.
  std::optional<PlayerId> last_kicker;
  int kick_immunity = 0;

  Vec2 velocity() const { return {vx, vy}; }
  friend bool operator==(const BallState&, const BallState&) = default;
};

struct Score {
  int left = 0;
  int right = 0;
  friend bool operator==(const Score&, const Score&) = default;
};

/// Live simulator state. Player ids equal their index in `players`.
struct WorldState {
  int tick = 0;
  std::vector<PlayerState> players;
  BallState ball;
  Score score;
  std::optional<Team> possession_team;
  std::optional<Team> last_possession_team;

  const PlayerState& player(PlayerId id) const;  // throws UnknownPlayer
  PlayerState& player(PlayerId id);
  bool has_player(PlayerId id) const { return id >= 0 && id < static_cast<int>(players.size()); }
  /// The team's goalkeeper, if it fields one.
  std::optional<PlayerId> goalkeeper(Team t) const;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

using PlayerFilter = std::function<bool(const PlayerState&)>;

/// Id of the filtered player closest to p; ties go to the smallest id.
/// Returns nullopt when the filter matches nobody.
std::optional<PlayerId> find_nearest_player(const WorldState& w, Vec2 p, const PlayerFilter& filter);
/// As find_nearest_player but throws EmptyFilter on an empty match.
PlayerId nearest_player(const WorldState& w, Vec2 p, const PlayerFilter& filter);

/// True iff an opposing player is within `range` of the player and within
/// `half_angle` radians of its heading.
bool opponent_in_cone(const WorldState& w, PlayerId id, double half_angle, double range);

}  // namespace kickoff
