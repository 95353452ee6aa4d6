#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace kickoff::lang {

/// Built-in skills that `do` and `with behavior` may name.
enum class Builtin {
  RuleBot,
  IdleBot,
  MoveToPoint,
  ZigzagDribbleToGoal,
  GiveAndGo,
  DribbleToPointAndShoot,
  ShootToCorner,
  HoldPosition,
};

struct BuiltinSpec {
  Builtin id;
  std::string_view name;
  int arity;
};

inline constexpr std::array<BuiltinSpec, 8> kBuiltins = {{
    {Builtin::RuleBot, "RuleBot", 0},
    {Builtin::IdleBot, "IdleBot", 0},
    {Builtin::MoveToPoint, "MoveToPoint", 1},
    {Builtin::ZigzagDribbleToGoal, "ZigzagDribbleToGoal", 0},
    {Builtin::GiveAndGo, "GiveAndGo", 1},
    {Builtin::DribbleToPointAndShoot, "DribbleToPointAndShoot", 1},
    {Builtin::ShootToCorner, "ShootToCorner", 1},
    {Builtin::HoldPosition, "HoldPosition", 0},
}};

std::optional<Builtin> builtin_from_name(std::string_view name);
std::string_view builtin_name(Builtin b);

/// Expression-level helper functions.
enum class Helper {
  Move,
  Dist,
  NearestOpponent,
  NearestTeammate,
  OpponentInCone,
  HasBall,
  TeamHasBall,
  OpponentHasBall,
  InRegion,
  OpponentKeeper,
  MoveToward,
  MoveBearing,
  PassTo,
  LongPassTo,
  HighPassTo,
  ShootAt,
  ShootCorner,
  EvadeToward,
  Phase,
  Abs,
  Min,
  Max,
  Rect,
  Circle,
};

struct HelperSpec {
  Helper id;
  std::string_view name;
  int min_args;
  int max_args;
  /// The helper yields an action, so it is a valid `take` operand.
  bool yields_action;
};

inline constexpr std::array<HelperSpec, 24> kHelpers = {{
    {Helper::Move, "Move", 1, 1, true},
    {Helper::Dist, "dist", 2, 2, false},
    {Helper::NearestOpponent, "nearest_opponent", 1, 1, false},
    {Helper::NearestTeammate, "nearest_teammate", 1, 1, false},
    {Helper::OpponentInCone, "opponent_in_cone", 1, 3, false},
    {Helper::HasBall, "has_ball", 1, 1, false},
    {Helper::TeamHasBall, "team_has_ball", 1, 1, false},
    {Helper::OpponentHasBall, "opponent_has_ball", 1, 1, false},
    {Helper::InRegion, "in_region", 2, 2, false},
    {Helper::OpponentKeeper, "opponent_keeper", 1, 1, false},
    {Helper::MoveToward, "move_toward", 1, 1, true},
    {Helper::MoveBearing, "move_bearing", 2, 2, true},
    {Helper::PassTo, "pass_to", 1, 1, true},
    {Helper::LongPassTo, "long_pass_to", 1, 1, true},
    {Helper::HighPassTo, "high_pass_to", 1, 1, true},
    {Helper::ShootAt, "shoot_at", 1, 1, true},
    {Helper::ShootCorner, "shoot_corner", 1, 1, true},
    {Helper::EvadeToward, "evade_toward", 4, 4, false},
    {Helper::Phase, "phase", 1, 1, false},
    {Helper::Abs, "abs", 1, 1, false},
    {Helper::Min, "min", 2, 2, false},
    {Helper::Max, "max", 2, 2, false},
    {Helper::Rect, "rect", 4, 4, false},
    {Helper::Circle, "circle", 3, 3, false},
}};

const HelperSpec* find_helper(std::string_view name);

/// Named points usable anywhere.
enum class Constant { LeftGoal, RightGoal, OwnGoal, OpponentGoal };
inline constexpr std::array<std::string_view, 4> kConstantNames = {"left_goal", "right_goal", "own_goal",
                                                                   "opponent_goal"};
std::optional<Constant> constant_from_name(std::string_view name);

inline constexpr std::array<std::string_view, 11> kAttributes = {
    "x", "y", "position", "heading", "sprinting", "dribbling", "has_ball", "team", "role", "height", "speed"};
bool is_attribute(std::string_view name);

/// Parameters with engine meaning.
inline constexpr std::string_view kParamPossessionTermination = "possession_termination";
inline constexpr std::string_view kParamMaxTicks = "max_ticks";

/// Half-angle (radians) and range of opponent_in_cone when omitted.
inline constexpr double kDefaultConeHalfAngle = 0.4;
inline constexpr double kDefaultConeRange = 0.12;
/// Goal-mouth y offset of shoot_corner / ShootToCorner aim points.
inline constexpr double kCornerAimOffset = 0.04;

}  // namespace kickoff::lang
