#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kickoff/core/action.hpp"
#include "kickoff/core/errors.hpp"
#include "kickoff/core/geometry.hpp"
#include "kickoff/core/rng.hpp"
#include "kickoff/core/world.hpp"

namespace kickoff {

/// Physics constants. Distances are field units, times are ticks.
struct SimParams {
  double tick_hz = 10.0;
  double base_speed = 0.008;
  double sprint_mult = 1.5;
  double dribble_mult = 0.8;
  double control_radius = 0.03;
  double short_pass_speed = 0.030;
  double long_pass_speed = 0.045;
  double high_pass_speed = 0.040;
  double shot_speed = 0.055;
  double ball_friction = 0.96;
  double slide_radius = 0.035;
  int slide_cooldown = 20;
  double intercept_radius = 0.02;
  int max_ticks = 400;
  double env_noise_p = 0.0;

  /// Throws Error when any constraint is violated.
  void check() const;
  friend bool operator==(const SimParams&, const SimParams&) = default;
};

/// Applies `key = value` lines (keys are the field names; `#` comments and
/// blank lines allowed) on top of `base`.
SimParams parse_sim_params(std::string_view text, SimParams base = {});
SimParams load_sim_params(const std::string& path, SimParams base = {});

/// A free ball is capturable only below this height.
inline constexpr double kCaptureHeight = 0.01;
/// A ball crossing the goal line at or above this height goes over the bar.
inline constexpr double kGoalHeight = 0.07;
/// Ticks a high pass spends at or above kCaptureHeight after release.
inline constexpr int kHighPassAirTicks = 12;
/// Vertical deceleration per tick during flight.
inline constexpr double kGravity = 0.004;
/// Ticks after a kick during which the kicker cannot recapture its own ball.
inline constexpr int kKickImmunityTicks = 4;
/// Balls faster than this use the tighter intercept radius.
inline constexpr double kFastBallSpeed = 0.01;
/// Long passes prefer receivers farther than this.
inline constexpr double kLongPassMinRange = 0.3;
/// Steal radius multiplier against an owner who is dribbling.
inline constexpr double kDribbleShield = 0.5;
/// Fraction of the goal-mouth half-width an unaimed shot is placed off
/// centre per unit of the shooter's lateral heading.
inline constexpr double kShotSpread = 1.0;

/// Target of a Shoot without aim point: the goal centre shifted across the
/// mouth by the shooter's lateral heading, so the RL action codes alone can
/// pick a side.
Vec2 unaimed_shot_target(const PlayerState& kicker, const FieldSpec& field);

/// Initial vertical speed of a high pass.
constexpr double high_pass_vz() { return kGravity * kHighPassAirTicks / 2.0; }

enum class EventKind { Goal, BallOut, PossessionChange, PassReleased, ShotReleased, TackleWon, Touch };

struct Event {
  EventKind kind = EventKind::Touch;
  /// Goal: scoring team. PossessionChange: the team gaining the ball.
  Team team = Team::Left;
  /// PossessionChange only: the team losing the ball.
  Team from = Team::Left;
  PlayerId player = -1;
  Action pass_kind = Action::Idle;

  friend bool operator==(const Event&, const Event&) = default;
};

struct TerminationCause {
  enum class Kind { Goal, BallOut, PossessionChange, MaxTicks, MonitorTerminate, BehaviorTerminate };
  Kind kind = Kind::MaxTicks;
  std::optional<Team> team;  // scoring team for Goal

  friend bool operator==(const TerminationCause&, const TerminationCause&) = default;
};

/// Wire and histogram name: goal, ball_out, possession_change, max_ticks,
/// monitor, behavior.
std::string_view cause_name(TerminationCause::Kind k);
/// Histogram key that distinguishes the scoring side ("goal_left", ...).
std::string cause_key(const TerminationCause& c);

class MissingAction : public Error {
 public:
  explicit MissingAction(PlayerId id) : Error("no action for player " + std::to_string(id)), id_(id) {}
  PlayerId id() const { return id_; }

 private:
  PlayerId id_;
};

/// Advances the world one tick in place. `cmds[i]` is player i's command.
std::vector<Event> step_world(WorldState& w, std::span<const Command> cmds, const SimParams& p,
                              const FieldSpec& field, RngStream& rng);

/// Current controller of the ball: the owner, else the nearest player within
/// control radius of a low, slow, free ball (ties by smallest id), else none.
std::optional<PlayerId> detect_possession(const WorldState& w, const SimParams& p);

struct TerminationInputs {
  bool monitor_terminate = false;
  bool behavior_terminate = false;
  bool possession_termination = true;
};

/// Highest-priority cause among Goal > BallOut > PossessionChange >
/// MonitorTerminate > BehaviorTerminate > MaxTicks.
std::optional<TerminationCause> check_termination(const WorldState& w, std::span<const Event> events,
                                                  const TerminationInputs& in, const SimParams& p);

}  // namespace kickoff
