#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "kickoff/core/action.hpp"
#include "kickoff/core/rng.hpp"
#include "kickoff/core/world.hpp"
#include "kickoff/lang/eval.hpp"
#include "kickoff/lang/library.hpp"
#include "kickoff/sim/sim.hpp"

namespace kickoff::behavior {

/// What a behavior may read while choosing an action.
struct BehaviorContext {
  const lang::EvalEnv* env = nullptr;
  const WorldState* world = nullptr;
  const SimParams* sim = nullptr;
  RngStream* rng = nullptr;
};

/// Reference bot constants, in one place.
struct RuleBotTuning {
  double gk_advance_radius = 0.25;
  double gk_line_band = 0.005;
  double gk_reaction_range = 0.3;
  double pass_cone_half_angle = 0.4;
  double pass_cone_range = 0.12;
  double home_band = 0.02;
};

/// Reference policy for players without a script.
Command rule_bot(const WorldState& w, PlayerId self, const SimParams& sim, const FieldSpec& field,
                 const RuleBotTuning& tuning = {});

/// Greedy single-tick move from `from` toward `to`: the compass direction
/// closest to the bearing, or Idle within `band`.
Command step_toward(Vec2 from, Vec2 to, double band);

/// Shot aim at the goal-mouth corner farther from the defending keeper.
Vec2 far_corner_aim(const WorldState& w, const PlayerState& shooter);

/// Stateful built-in skill. step() returns nullopt once the skill has
/// finished; that call consumes no tick.
class BuiltinState {
 public:
  virtual ~BuiltinState() = default;
  virtual std::optional<Command> step(const BehaviorContext& ctx, PlayerId self) = 0;
};

std::unique_ptr<BuiltinState> make_builtin(lang::Builtin kind, std::vector<lang::Value> args);

/// Arrival band of MoveToPoint and DribbleToPointAndShoot.
inline constexpr double kArrivalBand = 0.02;
/// ZigzagDribbleToGoal swing angle and period.
inline constexpr double kZigzagDegrees = 25.0;
inline constexpr int kZigzagPeriod = 8;
/// GiveAndGo gives up waiting for the return pass after this many ticks.
inline constexpr int kGiveAndGoPatience = 40;
/// GiveAndGo runs this far beyond the nearest opponent.
inline constexpr double kGiveAndGoLead = 0.15;

}  // namespace kickoff::behavior
