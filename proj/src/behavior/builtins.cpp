#include "kickoff/behavior/builtins.hpp"

#include <cmath>
#include <numbers>

namespace kickoff::behavior {

using lang::Value;

Command step_toward(Vec2 from, Vec2 to, double band) {
  const Vec2 d = to - from;
  if (norm(d) <= band) return Command(Action::Idle);
  return Command(move_action(nearest_compass(d)));
}

Vec2 far_corner_aim(const WorldState& w, const PlayerState& shooter) {
  const Vec2 goal = attacking_goal(shooter.team);
  const auto keeper = w.goalkeeper(other(shooter.team));
  if (!keeper) return goal;
  const double ky = w.players[*keeper].pos.y;
  const double sign = ky > 0.0 ? -1.0 : (ky < 0.0 ? 1.0 : (shooter.pos.y >= 0.0 ? -1.0 : 1.0));
  return goal + Vec2{0.0, sign * lang::kCornerAimOffset};
}

namespace {

bool in_attacking_box(const FieldSpec& field, const PlayerState& p) {
  const Region* box = field.find_region(p.team == Team::Left ? "right_penalty_box" : "left_penalty_box");
  return box && region_contains(*box, p.pos);
}

Command gk_policy(const WorldState& w, const PlayerState& me, const SimParams& sim, const FieldSpec& field,
                  const RuleBotTuning& t) {
  const BallState& b = w.ball;
  if (b.owner == me.id) {
    const auto mate = find_nearest_player(w, me.pos, [&](const PlayerState& q) { return q.team == me.team && q.id != me.id; });
    if (!mate) return Command(Action::Idle);
    return Command(Action::ShortPass, w.players[*mate].pos);
  }
  const Vec2 goal = defending_goal(me.team);
  // Reaction limit: the keeper holds its spot while an opponent's kick is in flight near goal.
  if (!b.owner && b.last_kicker && w.player(*b.last_kicker).team != me.team && norm(b.velocity()) > kFastBallSpeed &&
      distance(b.pos, goal) <= t.gk_reaction_range) {
    return Command(Action::Idle);
  }
  if (distance(b.pos, goal) <= t.gk_advance_radius) {
    if (b.owner && w.players[*b.owner].team != me.team) {
      if (me.slide_cooldown == 0 && distance(w.players[*b.owner].pos, me.pos) <= sim.slide_radius) {
        return Command(Action::Slide);
      }
    }
    return step_toward(me.pos, b.pos, 0.0);
  }
  const double y = std::clamp(b.pos.y, -field.goal_mouth_half, field.goal_mouth_half);
  return step_toward(me.pos, {goal.x, y}, t.gk_line_band);
}

}  // namespace

Command rule_bot(const WorldState& w, PlayerId self, const SimParams& sim, const FieldSpec& field,
                 const RuleBotTuning& t) {
  const PlayerState& me = w.player(self);
  if (me.role == Role::GK) return gk_policy(w, me, sim, field, t);

  const BallState& b = w.ball;
  const Vec2 home = role_home(me.team, me.role);
  const Vec2 dir = attack_direction(me.team);

  if (b.owner == me.id) {
    if (in_attacking_box(field, me)) return Command(Action::Shoot, far_corner_aim(w, me));
    if (opponent_in_cone(w, me.id, t.pass_cone_half_angle, t.pass_cone_range)) {
      const auto mate = find_nearest_player(w, me.pos, [&](const PlayerState& q) {
        return q.team == me.team && q.id != me.id && dot(q.pos - me.pos, dir) > 0.0;
      });
      if (mate) return Command(Action::ShortPass, w.players[*mate].pos);
    }
    if (!me.dribbling) return Command(Action::Dribble);
    return step_toward(me.pos, attacking_goal(me.team), 0.0);
  }

  const auto outfield_nearest = [&](Team team) {
    return find_nearest_player(w, b.pos, [&](const PlayerState& q) { return q.team == team && q.role != Role::GK; });
  };

  if (b.owner) {
    const PlayerState& owner = w.players[*b.owner];
    if (owner.team == me.team) return step_toward(me.pos, home, t.home_band);
    if (outfield_nearest(me.team) == me.id) {
      if (me.slide_cooldown == 0 && distance(owner.pos, me.pos) <= sim.slide_radius) return Command(Action::Slide);
      return step_toward(me.pos, b.pos, 0.0);
    }
    return step_toward(me.pos, home, t.home_band);
  }

  if (outfield_nearest(me.team) == me.id) return step_toward(me.pos, b.pos, 0.0);
  return step_toward(me.pos, home, t.home_band);
}

namespace {

lang::EvalContext eval_ctx(const BehaviorContext& ctx, PlayerId self) {
  lang::EvalContext e;
  e.env = ctx.env;
  e.world = ctx.world;
  e.self = self;
  e.rng = ctx.rng;
  return e;
}

const FieldSpec& field_of(const BehaviorContext& ctx) {
  return ctx.env && ctx.env->field ? *ctx.env->field : FieldSpec::standard();
}

class RuleBotState final : public BuiltinState {
 public:
  std::optional<Command> step(const BehaviorContext& ctx, PlayerId self) override {
    return rule_bot(*ctx.world, self, *ctx.sim, field_of(ctx));
  }
};

class IdleState final : public BuiltinState {
 public:
  std::optional<Command> step(const BehaviorContext&, PlayerId) override { return Command(Action::Idle); }
};

class HoldPositionState final : public BuiltinState {
 public:
  std::optional<Command> step(const BehaviorContext& ctx, PlayerId self) override {
    const Vec2 pos = ctx.world->player(self).pos;
    if (!spot_) spot_ = pos;
    return step_toward(pos, *spot_, kArrivalBand);
  }

 private:
  std::optional<Vec2> spot_;
};

class MoveToPointState final : public BuiltinState {
 public:
  explicit MoveToPointState(Value target) : target_(std::move(target)) {}
  std::optional<Command> step(const BehaviorContext& ctx, PlayerId self) override {
    const Vec2 pos = ctx.world->player(self).pos;
    const Vec2 target = lang::as_point(target_, eval_ctx(ctx, self));
    if (distance(pos, target) <= kArrivalBand) return std::nullopt;
    return step_toward(pos, target, 0.0);
  }

 private:
  Value target_;
};

class DribbleToPointAndShootState final : public BuiltinState {
 public:
  explicit DribbleToPointAndShootState(Value target) : target_(std::move(target)) {}
  std::optional<Command> step(const BehaviorContext& ctx, PlayerId self) override {
    if (shot_) return std::nullopt;
    const PlayerState& me = ctx.world->player(self);
    const Vec2 target = lang::as_point(target_, eval_ctx(ctx, self));
    if (distance(me.pos, target) <= kArrivalBand) {
      shot_ = true;
      return Command(Action::Shoot, far_corner_aim(*ctx.world, me));
    }
    return step_toward(me.pos, target, 0.0);
  }

 private:
  Value target_;
  bool shot_ = false;
};

class ShootToCornerState final : public BuiltinState {
 public:
  explicit ShootToCornerState(Value side) : side_(std::move(side)) {}
  std::optional<Command> step(const BehaviorContext& ctx, PlayerId self) override {
    if (shot_) return std::nullopt;
    shot_ = true;
    const auto* s = side_.get_if<std::string>();
    if (!s || (*s != "left" && *s != "right")) throw lang::EvalError("ShootToCorner side must be \"left\" or \"right\"");
    const PlayerState& me = ctx.world->player(self);
    const double sign = *s == "left" ? 1.0 : -1.0;
    const Vec2 aim = attacking_goal(me.team) + perp(attack_direction(me.team)) * (sign * lang::kCornerAimOffset);
    return Command(Action::Shoot, aim);
  }

 private:
  Value side_;
  bool shot_ = false;
};

class ZigzagState final : public BuiltinState {
 public:
  std::optional<Command> step(const BehaviorContext& ctx, PlayerId self) override {
    if (shot_) return std::nullopt;
    const WorldState& w = *ctx.world;
    const PlayerState& me = w.player(self);
    const FieldSpec& field = field_of(ctx);
    const int k = ticks_++;
    if (w.ball.owner != me.id && !w.ball.owner) return step_toward(me.pos, w.ball.pos, 0.0);
    if (w.ball.owner == me.id && in_attacking_box(field, me)) {
      shot_ = true;
      return Command(Action::Shoot, far_corner_aim(w, me));
    }
    Vec2 bearing = attacking_goal(me.team) - me.pos;
    if (opponent_in_cone(w, me.id, lang::kDefaultConeHalfAngle, lang::kDefaultConeRange)) {
      const double sign = (k / kZigzagPeriod) % 2 == 0 ? 1.0 : -1.0;
      bearing = rotated(bearing, sign * kZigzagDegrees * std::numbers::pi / 180.0);
    }
    return Command(move_action(nearest_compass(bearing)));
  }

 private:
  int ticks_ = 0;
  bool shot_ = false;
};

class GiveAndGoState final : public BuiltinState {
 public:
  explicit GiveAndGoState(Value partner) : partner_(std::move(partner)) {}
  std::optional<Command> step(const BehaviorContext& ctx, PlayerId self) override {
    const WorldState& w = *ctx.world;
    const PlayerState& me = w.player(self);
    const auto ectx = eval_ctx(ctx, self);
    if (!passed_) {
      if (w.ball.owner == me.id) {
        passed_ = true;
        return Command(Action::ShortPass, lang::as_point(partner_, ectx));
      }
      if (w.ball.owner && w.players[*w.ball.owner].team == me.team) {
        passed_ = true;
      } else {
        return step_toward(me.pos, w.ball.pos, 0.0);
      }
    }
    if (w.ball.owner == me.id) return std::nullopt;
    if (++waited_ > kGiveAndGoPatience) return std::nullopt;
    if (!me.sprinting) return Command(Action::Sprint);
    const Vec2 dir = attack_direction(me.team);
    const auto opp = find_nearest_player(w, me.pos, [&](const PlayerState& q) { return q.team != me.team; });
    Vec2 target = attacking_goal(me.team);
    if (opp) target = Vec2{w.players[*opp].pos.x + dir.x * kGiveAndGoLead, me.pos.y};
    return step_toward(me.pos, field_of(ctx).clamp(target), kArrivalBand);
  }

 private:
  Value partner_;
  bool passed_ = false;
  int waited_ = 0;
};

}  // namespace

std::unique_ptr<BuiltinState> make_builtin(lang::Builtin kind, std::vector<Value> args) {
  auto arg = [&](std::size_t i) -> Value {
    if (i >= args.size()) throw lang::EvalError("missing builtin argument");
    return args[i];
  };
  switch (kind) {
    case lang::Builtin::RuleBot:
      return std::make_unique<RuleBotState>();
    case lang::Builtin::IdleBot:
      return std::make_unique<IdleState>();
    case lang::Builtin::MoveToPoint:
      return std::make_unique<MoveToPointState>(arg(0));
    case lang::Builtin::ZigzagDribbleToGoal:
      return std::make_unique<ZigzagState>();
    case lang::Builtin::GiveAndGo:
      return std::make_unique<GiveAndGoState>(arg(0));
    case lang::Builtin::DribbleToPointAndShoot:
      return std::make_unique<DribbleToPointAndShootState>(arg(0));
    case lang::Builtin::ShootToCorner:
      return std::make_unique<ShootToCornerState>(arg(0));
    case lang::Builtin::HoldPosition:
      return std::make_unique<HoldPositionState>();
  }
  throw lang::EvalError("unknown builtin");
}

}  // namespace kickoff::behavior
