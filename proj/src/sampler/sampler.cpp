#include "kickoff/sampler/sampler.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "kickoff/lang/library.hpp"

namespace kickoff {

using lang::Expr;
using lang::ObjRef;
using lang::SpecKind;
using lang::Value;

namespace {

Vec2 sample_in(const Region& r, RngStream& rng) {
  if (const auto* rect = std::get_if<RectRegion>(&r)) {
    const double x = rng.uniform(rect->min.x, rect->max.x);
    const double y = rng.uniform(rect->min.y, rect->max.y);
    return {x, y};
  }
  const auto& c = std::get<CircleRegion>(r);
  const double radius = c.radius * std::sqrt(rng.uniform01());
  const double theta = 2.0 * std::numbers::pi * rng.uniform01();
  return c.center + Vec2{radius * std::cos(theta), radius * std::sin(theta)};
}

bool is_base(SpecKind k) { return k != SpecKind::OffsetBy && k != SpecKind::Facing; }

class SceneDraw {
 public:
  SceneDraw(const lang::Program& p, const FieldSpec& f, RngStream& rng) : prog_(p), field_(f), rng_(rng) {
    env_.program = &p;
    env_.field = &f;
  }

  /// One attempt; returns false when a requirement fails.
  bool attempt(Scene& out) {
    env_.params.clear();
    env_.objects.clear();
    world_ = WorldState{};
    placed_.clear();
    ball_declared_ = false;

    for (const auto& o : prog_.objects) {
      if (o.cls.is_ball) {
        env_.objects.push_back(ObjRef::ball());
        ball_declared_ = true;
        continue;
      }
      PlayerState p;
      p.id = static_cast<PlayerId>(world_.players.size());
      p.team = o.cls.team;
      p.role = o.cls.role;
      world_.players.push_back(p);
      placed_.push_back(false);
      env_.objects.push_back(ObjRef{p.id, false});
    }
    ball_placed_ = !ball_declared_;

    for (const auto& param : prog_.params) {
      const Value v = lang::evaluate(param.value, context(std::nullopt));
      env_.params.push_back(v);
    }
    for (std::size_t i = 0; i < prog_.objects.size(); ++i) place(i);
    for (const auto& r : prog_.requirements) {
      if (!lang::eval_bool(r, context(std::nullopt))) return false;
    }

    out.players.clear();
    out.ego.reset();
    const auto ego = prog_.ego();
    for (std::size_t i = 0; i < prog_.objects.size(); ++i) {
      const auto& decl = prog_.objects[i];
      if (decl.cls.is_ball) continue;
      const PlayerState& p = world_.players[env_.objects[i].player];
      ScenePlayer sp;
      sp.team = p.team;
      sp.role = p.role;
      sp.pos = p.pos;
      sp.heading = p.heading;
      sp.object_index = i;
      if (const auto* w = decl.find_prop("behavior")) sp.behavior = lang::eval_behavior(w->value, context(p.id));
      if (ego && *ego == i) {
        sp.controller = Controller::rl();
        out.ego = p.id;
      } else if (sp.behavior) {
        sp.controller = Controller::scripted(behavior_label(*sp.behavior));
      } else {
        sp.controller = Controller::bot();
      }
      out.players.push_back(std::move(sp));
    }
    out.ball = world_.ball.pos;
    out.params = env_.params;
    out.objects = env_.objects;
    return true;
  }

 private:
  std::string behavior_label(const lang::BehaviorCall& c) const {
    if (c.builtin) return std::string(lang::builtin_name(static_cast<lang::Builtin>(c.index)));
    return prog_.behaviors[c.index].name;
  }

  lang::EvalContext context(std::optional<PlayerId> self) {
    lang::EvalContext ctx;
    ctx.env = &env_;
    ctx.world = &world_;
    ctx.placed = &placed_;
    ctx.ball_placed = ball_placed_;
    ctx.self = self;
    ctx.rng = &rng_;
    return ctx;
  }

  void place(std::size_t index) {
    const auto& decl = prog_.objects[index];
    const ObjRef ref = env_.objects[index];
    const std::optional<PlayerId> self = ref.is_ball ? std::nullopt : std::optional<PlayerId>(ref.player);

    const lang::Specifier* base = nullptr;
    for (const auto& s : decl.specifiers) {
      if (!is_base(s.kind)) continue;
      if (base) throw ConflictingSpecifiers("object " + std::to_string(index + 1) + " has two position specifiers");
      base = &s;
    }

    Vec2 pos;
    if (base) {
      pos = base_position(*base, self);
    } else if (ref.is_ball) {
      pos = {0.0, 0.0};
    } else {
      const Vec2 home = role_home(decl.cls.team, decl.cls.role);
      pos = home + Vec2{rng_.uniform(-kDefaultPlacementJitter, kDefaultPlacementJitter),
                        rng_.uniform(-kDefaultPlacementJitter, kDefaultPlacementJitter)};
    }
    for (const auto& s : decl.specifiers) {
      if (s.kind == SpecKind::OffsetBy) pos += lang::eval_point(s.value, context(self));
    }
    pos = field_.clamp(pos);

    if (ref.is_ball) {
      world_.ball.pos = pos;
      ball_placed_ = true;
      return;
    }
    PlayerState& p = world_.players[ref.player];
    p.pos = pos;
    placed_[ref.player] = true;
    p.heading = normalized(attacking_goal(p.team) - pos);
    for (const auto& s : decl.specifiers) {
      if (s.kind == SpecKind::Facing) p.heading = lang::as_heading(lang::evaluate(s.value, context(self)));
    }
  }

  Vec2 base_position(const lang::Specifier& s, std::optional<PlayerId> self) {
    const auto ctx = context(self);
    switch (s.kind) {
      case SpecKind::At:
        return lang::eval_point(s.value, ctx);
      case SpecKind::In: {
        const Value v = lang::evaluate(s.value, ctx);
        const auto* r = v.get_if<Region>();
        if (!r) throw lang::EvalError("'in' needs a region");
        if (!region_well_formed(*r)) throw lang::BadParams("malformed region");
        return sample_in(*r, rng_);
      }
      default:
        break;
    }
    const Value target = lang::evaluate(s.value, ctx);
    const auto* obj = target.get_if<ObjRef>();
    if (!obj || obj->is_ball) throw lang::EvalError("relative specifier needs a player");
    if (!placed_[obj->player]) throw lang::ForwardReference("player " + std::to_string(obj->player));
    const PlayerState& o = world_.players[obj->player];
    const double d = s.by ? lang::eval_number(*s.by, ctx) : lang::kDefaultRelativeDistance;
    switch (s.kind) {
      case SpecKind::AheadOf:
        return o.pos + o.heading * d;
      case SpecKind::Behind:
        return o.pos - o.heading * d;
      case SpecKind::LeftOf:
        return o.pos + perp(o.heading) * d;
      case SpecKind::RightOf:
        return o.pos - perp(o.heading) * d;
      default:
        break;
    }
    throw lang::EvalError("unexpected specifier");
  }

  const lang::Program& prog_;
  const FieldSpec& field_;
  RngStream& rng_;
  lang::EvalEnv env_;
  WorldState world_;
  std::vector<bool> placed_;
  bool ball_declared_ = false;
  bool ball_placed_ = true;
};

}  // namespace

Value sample_distribution(const Expr& e, RngStream& rng) {
  lang::EvalEnv env;
  env.field = &FieldSpec::standard();
  WorldState w;
  lang::EvalContext ctx;
  ctx.env = &env;
  ctx.world = &w;
  ctx.rng = &rng;
  return lang::evaluate(e, ctx);
}

Scene sample_scene(const lang::Program& program, const FieldSpec& field, RngStream& rng, int max_rejections) {
  if (max_rejections < 1) throw Error("max_rejections must be at least 1");
  Scene scene;
  scene.seed = rng.seed();
  SceneDraw draw(program, field, rng);
  for (int attempt = 1; attempt <= max_rejections; ++attempt) {
    if (draw.attempt(scene)) {
      scene.attempts = attempt;
      return scene;
    }
  }
  throw Unsatisfiable(max_rejections);
}

WorldState scene_to_world(const Scene& scene, double control_radius) {
  WorldState w;
  for (std::size_t i = 0; i < scene.players.size(); ++i) {
    const auto& sp = scene.players[i];
    PlayerState p;
    p.id = static_cast<PlayerId>(i);
    p.team = sp.team;
    p.role = sp.role;
    p.pos = sp.pos;
    p.heading = sp.heading;
    p.controller = sp.controller;
    w.players.push_back(p);
  }
  w.ball.pos = scene.ball;
  const auto owner = find_nearest_player(w, scene.ball, [&](const PlayerState& p) {
    return distance(p.pos, scene.ball) <= control_radius;
  });
  if (owner) {
    w.ball.owner = owner;
    w.ball.pos = w.players[*owner].pos;
    w.possession_team = w.players[*owner].team;
    w.last_possession_team = w.possession_team;
  }
  return w;
}

lang::EvalEnv scene_env(const Scene& scene, const lang::Program& program, const FieldSpec& field) {
  lang::EvalEnv env;
  env.program = &program;
  env.field = &field;
  env.params = scene.params;
  env.objects = scene.objects;
  return env;
}

std::string scene_to_json(const Scene& scene) {
  nlohmann::json j;
  j["seed"] = scene.seed;
  j["players"] = nlohmann::json::array();
  for (const auto& p : scene.players) {
    j["players"].push_back({{"team", team_name(p.team)},
                            {"role", role_name(p.role)},
                            {"x", p.pos.x},
                            {"y", p.pos.y},
                            {"hx", p.heading.x},
                            {"hy", p.heading.y},
                            {"controller", p.controller.label()}});
  }
  j["ball"] = {{"x", scene.ball.x}, {"y", scene.ball.y}};
  return j.dump();
}

}  // namespace kickoff
