#include "kickoff/lang/eval.hpp"

#include <cmath>
#include <numbers>

#include "kickoff/lang/library.hpp"

namespace kickoff::lang {

bool operator==(const BehaviorCall& a, const BehaviorCall& b) {
  return a.builtin == b.builtin && a.index == b.index && a.args == b.args;
}

std::string_view value_type_name(const Value& v) {
  static constexpr std::array<std::string_view, 10> kNames = {
      "none", "number", "boolean", "string", "vector", "compass", "action", "region", "object", "behavior"};
  return kNames[v.v.index()];
}

namespace {

[[noreturn]] void type_error(std::string_view want, const Value& got) {
  throw EvalError("expected " + std::string(want) + ", got " + std::string(value_type_name(got)));
}

bool visible(const EvalContext& ctx, PlayerId id) { return !ctx.placed || (*ctx.placed)[id]; }

const PlayerState& player_of(const EvalContext& ctx, ObjRef r) {
  if (!ctx.world->has_player(r.player)) throw UnknownPlayer(r.player);
  if (!visible(ctx, r.player)) throw ForwardReference("player " + std::to_string(r.player));
  return ctx.world->players[r.player];
}

const ObjRef& as_object(const Value& v) {
  const auto* r = v.get_if<ObjRef>();
  if (!r) type_error("object", v);
  return *r;
}

const PlayerState& as_player(const Value& v, const EvalContext& ctx) {
  const ObjRef& r = as_object(v);
  if (r.is_ball) throw EvalError("expected a player, got the ball");
  return player_of(ctx, r);
}

PlayerId self_id(const EvalContext& ctx) {
  if (!ctx.self) throw EvalError("'self' is not bound here");
  return *ctx.self;
}

const PlayerState& self_player(const EvalContext& ctx) { return player_of(ctx, ObjRef{self_id(ctx), false}); }

std::optional<PlayerId> nearest_where(const EvalContext& ctx, Vec2 p, auto&& pred) {
  std::optional<PlayerId> best;
  double best_d = 0.0;
  for (const auto& q : ctx.world->players) {
    if (!visible(ctx, q.id) || !pred(q)) continue;
    const double d = distance_squared(q.pos, p);
    if (!best || d < best_d) {
      best = q.id;
      best_d = d;
    }
  }
  return best;
}

Value ref_or_none(std::optional<PlayerId> id) {
  if (!id) return {};
  return ObjRef{*id, false};
}

Command move_along(Vec2 dir) {
  if (norm(dir) < 1e-9) return Command(Action::Idle);
  return Command(move_action(nearest_compass(dir)));
}

Vec2 attack_goal_of(const PlayerState& p) { return attacking_goal(p.team); }

/// Lookahead of evade_toward: one tick at base speed.
constexpr double kEvadeStep = 0.008;

/// Destination whose one-step predicted position lies farthest from the threat
/// (first wins ties).
Vec2 evade_choice(Vec2 self, const std::array<Vec2, 3>& options, Vec2 threat) {
  Vec2 best = options[0];
  double best_dist = -1.0;
  for (const Vec2& d : options) {
    const double gap = distance(self, d);
    const Vec2 next = gap > kEvadeStep ? self + (d - self) * (kEvadeStep / gap) : d;
    const double dist = distance(threat, next);
    if (dist > best_dist) {
      best_dist = dist;
      best = d;
    }
  }
  return best;
}

class Evaluator {
 public:
  explicit Evaluator(const EvalContext& ctx) : ctx_(ctx) {}

  Value eval(const Expr& e) {
    return std::visit([&](const auto& n) { return node(n); }, e.node);
  }

 private:
  Value node(const NumberLit& n) { return n.value; }
  Value node(const BoolLit& n) { return n.value; }
  Value node(const StringLit& n) { return n.value; }
  Value node(const CompassExpr& n) { return n.dir; }
  Value node(const PairExpr& n) { return Vec2{as_number(eval(*n.x)), as_number(eval(*n.y))}; }

  RngStream& rng() {
    if (!ctx_.rng) throw EvalError("distribution sampled where no random stream is available");
    return *ctx_.rng;
  }

  Value node(const RangeExpr& n) {
    const double lo = as_number(eval(*n.lo));
    const double hi = as_number(eval(*n.hi));
    if (!(hi >= lo)) throw BadParams("Range upper bound below lower bound");
    return rng().uniform(lo, hi);
  }
  Value node(const NormalExpr& n) {
    const double mu = as_number(eval(*n.mean));
    const double sigma = as_number(eval(*n.stddev));
    if (!(sigma >= 0.0)) throw BadParams("Normal standard deviation is negative");
    return rng().normal(mu, sigma);
  }
  Value node(const UniformExpr& n) { return eval(n.options[rng().index(n.options.size())]); }
  Value node(const DiscreteExpr& n) { return eval(n.options[discrete_pick(n)].value); }

 public:
  std::size_t discrete_pick(const DiscreteExpr& n) {
    std::vector<double> w;
    w.reserve(n.options.size());
    double total = 0.0;
    for (const auto& o : n.options) {
      const double x = as_number(eval(o.weight));
      if (!(x >= 0.0) || !std::isfinite(x)) throw BadParams("Discrete weights must be finite and non-negative");
      w.push_back(x);
      total += x;
    }
    if (!(total > 0.0)) throw BadParams("Discrete weights sum to zero");
    const double u = rng().uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      acc += w[i];
      if (u < acc) return i;
    }
    for (std::size_t i = w.size(); i-- > 0;) {
      if (w[i] > 0.0) return i;
    }
    return 0;
  }

 private:
  Value node(const NameExpr& n) {
    using K = Binding::Kind;
    switch (n.binding.kind) {
      case K::Param:
        if (n.binding.index >= static_cast<int>(ctx_.env->params.size())) {
          throw EvalError("parameter '" + n.name + "' read before it is sampled");
        }
        return ctx_.env->params[n.binding.index];
      case K::Object:
        return ctx_.env->objects.at(n.binding.index);
      case K::Region: {
        const Region* r = ctx_.env->field->find_region(n.name);
        if (!r) throw EvalError("unknown region '" + n.name + "'");
        return *r;
      }
      case K::Action:
        return Command(static_cast<Action>(n.binding.index));
      case K::Local:
        if (!ctx_.locals) throw EvalError("local '" + n.name + "' outside a behavior");
        return (*ctx_.locals).at(n.binding.index);
      case K::Self:
        return ObjRef{self_id(ctx_), false};
      case K::BallObject:
        return ObjRef::ball();
      case K::Tick:
        return static_cast<double>(ctx_.world->tick);
      case K::Constant:
        switch (static_cast<Constant>(n.binding.index)) {
          case Constant::LeftGoal:
            return Vec2{-ctx_.env->field->x_half, 0.0};
          case Constant::RightGoal:
            return Vec2{ctx_.env->field->x_half, 0.0};
          case Constant::OwnGoal:
            return defending_goal(self_player(ctx_).team);
          case Constant::OpponentGoal:
            return attacking_goal(self_player(ctx_).team);
        }
        break;
      default:
        break;
    }
    throw EvalError("unbound name '" + n.name + "'");
  }

  Value node(const AttrExpr& n) {
    const Value obj = eval(*n.object);
    const std::string& a = n.attr;
    if (const auto* v = obj.get_if<Vec2>()) {
      if (a == "x") return v->x;
      if (a == "y") return v->y;
      if (a == "position") return *v;
      throw EvalError("vector has no attribute '" + a + "'");
    }
    const ObjRef& r = as_object(obj);
    if (r.is_ball) {
      if (!ctx_.ball_placed) throw ForwardReference("the ball");
      const BallState& b = ctx_.world->ball;
      if (a == "x") return b.pos.x;
      if (a == "y") return b.pos.y;
      if (a == "position") return b.pos;
      if (a == "height") return b.height;
      if (a == "speed") return norm(b.velocity());
      if (a == "heading") return normalized(b.velocity());
      if (a == "has_ball") return b.owner.has_value();
      throw EvalError("ball has no attribute '" + a + "'");
    }
    const PlayerState& p = player_of(ctx_, r);
    if (a == "x") return p.pos.x;
    if (a == "y") return p.pos.y;
    if (a == "position") return p.pos;
    if (a == "heading") return p.heading;
    if (a == "sprinting") return p.sprinting;
    if (a == "dribbling") return p.dribbling;
    if (a == "has_ball") return ctx_.world->ball.owner == p.id;
    if (a == "team") return std::string(team_name(p.team));
    if (a == "role") return std::string(role_name(p.role));
    if (a == "height") return 0.0;
    if (a == "speed") return 0.0;
    throw EvalError("player has no attribute '" + a + "'");
  }

  Value node(const UnaryExpr& n) {
    const Value v = eval(*n.operand);
    if (n.op == UnaryOp::Not) return !as_bool(v);
    if (const auto* p = v.get_if<Vec2>()) return -*p;
    return -as_number(v);
  }

  Value node(const BinaryExpr& n) {
    switch (n.op) {
      case BinaryOp::Or:
        return as_bool(eval(*n.lhs)) || as_bool(eval(*n.rhs));
      case BinaryOp::And:
        return as_bool(eval(*n.lhs)) && as_bool(eval(*n.rhs));
      default:
        break;
    }
    const Value l = eval(*n.lhs);
    const Value r = eval(*n.rhs);
    switch (n.op) {
      case BinaryOp::Eq:
        return l == r;
      case BinaryOp::Ne:
        return !(l == r);
      case BinaryOp::Lt:
        return as_number(l) < as_number(r);
      case BinaryOp::Le:
        return as_number(l) <= as_number(r);
      case BinaryOp::Gt:
        return as_number(l) > as_number(r);
      case BinaryOp::Ge:
        return as_number(l) >= as_number(r);
      case BinaryOp::Add:
      case BinaryOp::Sub: {
        const double s = n.op == BinaryOp::Add ? 1.0 : -1.0;
        if (l.is<double>() && r.is<double>()) return as_number(l) + s * as_number(r);
        return as_point(l, ctx_) + s * as_point(r, ctx_);
      }
      case BinaryOp::Mul:
        if (l.is<double>() && r.is<double>()) return as_number(l) * as_number(r);
        if (l.is<double>()) return as_point(r, ctx_) * as_number(l);
        return as_point(l, ctx_) * as_number(r);
      case BinaryOp::Div: {
        const double d = as_number(r);
        if (d == 0.0) throw EvalError("division by zero");
        if (l.is<double>()) return as_number(l) / d;
        return as_point(l, ctx_) / d;
      }
      default:
        break;
    }
    throw EvalError("bad operator");
  }

  Value node(const TowardExpr& n) {
    const Vec2 target = as_point(eval(*n.target), ctx_);
    return normalized(target - self_player(ctx_).pos);
  }

  Value node(const CallExpr& n) {
    if (n.binding.kind != Binding::Kind::Helper) throw EvalError("'" + n.callee + "' is not a function");
    auto arg = [&](std::size_t i) { return eval(n.args.at(i)); };
    auto point = [&](std::size_t i) { return as_point(arg(i), ctx_); };
    auto number = [&](std::size_t i) { return as_number(arg(i)); };
    switch (static_cast<Helper>(n.binding.index)) {
      case Helper::Move: {
        const Value d = arg(0);
        if (const auto* c = d.get_if<Compass>()) return Command(move_action(*c));
        return move_along(as_point(d, ctx_));
      }
      case Helper::Dist: {
        const Value a = arg(0);
        const Value b = arg(1);
        if (a.is_none() || b.is_none()) return std::numeric_limits<double>::infinity();
        return distance(as_point(a, ctx_), as_point(b, ctx_));
      }
      case Helper::NearestOpponent: {
        const PlayerState& p = as_player(arg(0), ctx_);
        return ref_or_none(nearest_where(ctx_, p.pos, [&](const PlayerState& q) { return q.team != p.team; }));
      }
      case Helper::NearestTeammate: {
        const PlayerState& p = as_player(arg(0), ctx_);
        return ref_or_none(
            nearest_where(ctx_, p.pos, [&](const PlayerState& q) { return q.team == p.team && q.id != p.id; }));
      }
      case Helper::OpponentInCone: {
        const PlayerState& p = as_player(arg(0), ctx_);
        const double half = n.args.size() > 1 ? number(1) : kDefaultConeHalfAngle;
        const double range = n.args.size() > 2 ? number(2) : kDefaultConeRange;
        for (const auto& q : ctx_.world->players) {
          if (q.team == p.team || !visible(ctx_, q.id)) continue;
          const Vec2 off = q.pos - p.pos;
          const double d = norm(off);
          if (d <= range && (d < 1e-12 || angle_between(p.heading, off) <= half)) return true;
        }
        return false;
      }
      case Helper::HasBall: {
        const Value v = arg(0);
        if (v.is_none()) return false;
        const ObjRef& r = as_object(v);
        return !r.is_ball && ctx_.world->ball.owner == r.player;
      }
      case Helper::TeamHasBall: {
        const PlayerState& p = as_player(arg(0), ctx_);
        return ctx_.world->possession_team == p.team;
      }
      case Helper::OpponentHasBall: {
        const PlayerState& p = as_player(arg(0), ctx_);
        return ctx_.world->possession_team == other(p.team);
      }
      case Helper::InRegion: {
        const Value r = arg(1);
        const auto* reg = r.get_if<Region>();
        if (!reg) type_error("region", r);
        return region_contains(*reg, point(0));
      }
      case Helper::OpponentKeeper: {
        const PlayerState& p = as_player(arg(0), ctx_);
        return ref_or_none(nearest_where(ctx_, p.pos, [&](const PlayerState& q) {
          return q.team != p.team && q.role == Role::GK;
        }));
      }
      case Helper::MoveToward:
        return move_along(point(0) - self_player(ctx_).pos);
      case Helper::MoveBearing: {
        const Vec2 dir = point(0) - self_player(ctx_).pos;
        return move_along(rotated(dir, number(1) * std::numbers::pi / 180.0));
      }
      case Helper::PassTo:
        return Command(Action::ShortPass, point(0));
      case Helper::LongPassTo:
        return Command(Action::LongPass, point(0));
      case Helper::HighPassTo:
        return Command(Action::HighPass, point(0));
      case Helper::ShootAt:
        return Command(Action::Shoot, point(0));
      case Helper::ShootCorner: {
        const Value side = arg(0);
        const auto* s = side.get_if<std::string>();
        if (!s || (*s != "left" && *s != "right")) throw EvalError("shoot_corner side must be \"left\" or \"right\"");
        const PlayerState& me = self_player(ctx_);
        const Vec2 goal = attack_goal_of(me);
        // "left" is the shooter's left when facing the goal it attacks.
        const Vec2 left = perp(attack_direction(me.team));
        const double sign = *s == "left" ? 1.0 : -1.0;
        return Command(Action::Shoot, goal + left * (sign * kCornerAimOffset));
      }
      case Helper::EvadeToward: {
        const Value threat = arg(3);
        const std::array<Vec2, 3> options = {point(0), point(1), point(2)};
        if (threat.is_none()) return options[0];
        return evade_choice(self_player(ctx_).pos, options, as_point(threat, ctx_));
      }
      case Helper::Phase: {
        const double period = number(0);
        if (!(period > 0.0)) throw EvalError("phase period must be positive");
        return std::fmod(std::floor(ctx_.world->tick / period), 2.0);
      }
      case Helper::Abs:
        return std::abs(number(0));
      case Helper::Min:
        return std::min(number(0), number(1));
      case Helper::Max:
        return std::max(number(0), number(1));
      case Helper::Rect: {
        const double x0 = number(0), y0 = number(1), x1 = number(2), y1 = number(3);
        return Region(RectRegion{{std::min(x0, x1), std::min(y0, y1)}, {std::max(x0, x1), std::max(y0, y1)}});
      }
      case Helper::Circle: {
        const double r = number(2);
        if (!(r >= 0.0)) throw BadParams("circle radius is negative");
        return Region(CircleRegion{{number(0), number(1)}, r});
      }
    }
    throw EvalError("unknown helper '" + n.callee + "'");
  }

  const EvalContext& ctx_;
};

}  // namespace

double as_number(const Value& v) {
  if (const auto* d = v.get_if<double>()) return *d;
  type_error("number", v);
}

bool as_bool(const Value& v) {
  if (const auto* b = v.get_if<bool>()) return *b;
  type_error("boolean", v);
}

Vec2 as_point(const Value& v, const EvalContext& ctx) {
  if (const auto* p = v.get_if<Vec2>()) return *p;
  if (const auto* r = v.get_if<ObjRef>()) {
    if (r->is_ball) {
      if (!ctx.ball_placed) throw ForwardReference("the ball");
      return ctx.world->ball.pos;
    }
    return player_of(ctx, *r).pos;
  }
  type_error("point", v);
}

Vec2 as_heading(const Value& v) {
  if (const auto* c = v.get_if<Compass>()) return direction_vector(*c);
  if (const auto* p = v.get_if<Vec2>()) {
    if (norm(*p) < 1e-12) throw EvalError("heading vector is zero");
    return normalized(*p);
  }
  if (const auto* d = v.get_if<double>()) {
    const double r = *d * std::numbers::pi / 180.0;
    return {std::cos(r), std::sin(r)};
  }
  type_error("heading", v);
}

Value evaluate(const Expr& e, const EvalContext& ctx) { return Evaluator(ctx).eval(e); }

double eval_number(const Expr& e, const EvalContext& ctx) { return as_number(evaluate(e, ctx)); }
bool eval_bool(const Expr& e, const EvalContext& ctx) { return as_bool(evaluate(e, ctx)); }
Vec2 eval_point(const Expr& e, const EvalContext& ctx) { return as_point(evaluate(e, ctx), ctx); }

Command eval_command(const Expr& e, const EvalContext& ctx) {
  const Value v = evaluate(e, ctx);
  if (const auto* c = v.get_if<Command>()) return *c;
  type_error("action", v);
}

BehaviorCall eval_behavior(const Expr& e, const EvalContext& ctx) {
  if (const auto* u = e.as<UniformExpr>()) {
    if (!ctx.rng) throw EvalError("behavior choice needs a random stream");
    return eval_behavior(u->options[ctx.rng->index(u->options.size())], ctx);
  }
  if (const auto* d = e.as<DiscreteExpr>()) {
    Evaluator ev(ctx);
    return eval_behavior(d->options[ev.discrete_pick(*d)].value, ctx);
  }
  const auto* c = e.as<CallExpr>();
  if (!c) throw EvalError("expected a behavior call");
  BehaviorCall out;
  if (c->binding.kind == Binding::Kind::BuiltinBehavior) {
    out.builtin = true;
  } else if (c->binding.kind != Binding::Kind::UserBehavior) {
    throw EvalError("'" + c->callee + "' is not a behavior");
  }
  out.index = c->binding.index;
  out.args.reserve(c->args.size());
  for (const auto& a : c->args) out.args.push_back(evaluate(a, ctx));
  return out;
}

}  // namespace kickoff::lang
