#include "kickoff/sim/sim.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

namespace kickoff {

void SimParams::check() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(std::string("sim parameter ") + name + " must be positive");
  };
  positive(tick_hz, "tick_hz");
  positive(base_speed, "base_speed");
  positive(sprint_mult, "sprint_mult");
  positive(dribble_mult, "dribble_mult");
  positive(control_radius, "control_radius");
  positive(short_pass_speed, "short_pass_speed");
  positive(long_pass_speed, "long_pass_speed");
  positive(high_pass_speed, "high_pass_speed");
  positive(shot_speed, "shot_speed");
  positive(slide_radius, "slide_radius");
  positive(intercept_radius, "intercept_radius");
  if (!(ball_friction > 0.0 && ball_friction <= 1.0)) throw Error("sim parameter ball_friction must be in (0, 1]");
  if (slide_cooldown < 0) throw Error("sim parameter slide_cooldown must be non-negative");
  if (max_ticks < 1) throw Error("sim parameter max_ticks must be at least 1");
  if (!(env_noise_p >= 0.0 && env_noise_p <= 1.0)) throw Error("sim parameter env_noise_p must be in [0, 1]");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw Error("bad value for " + std::string(key));
  return out;
}

int parse_int(std::string_view key, std::string_view v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw Error("bad integer for " + std::string(key));
  return out;
}

}  // namespace

SimParams parse_sim_params(std::string_view text, SimParams p) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error("sim params line " + std::to_string(line_no) + ": expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view val = trim(line.substr(eq + 1));
    if (key == "tick_hz") p.tick_hz = parse_double(key, val);
    else if (key == "base_speed") p.base_speed = parse_double(key, val);
    else if (key == "sprint_mult") p.sprint_mult = parse_double(key, val);
    else if (key == "dribble_mult") p.dribble_mult = parse_double(key, val);
    else if (key == "control_radius") p.control_radius = parse_double(key, val);
    else if (key == "short_pass_speed") p.short_pass_speed = parse_double(key, val);
    else if (key == "long_pass_speed") p.long_pass_speed = parse_double(key, val);
    else if (key == "high_pass_speed") p.high_pass_speed = parse_double(key, val);
    else if (key == "shot_speed") p.shot_speed = parse_double(key, val);
    else if (key == "ball_friction") p.ball_friction = parse_double(key, val);
    else if (key == "slide_radius") p.slide_radius = parse_double(key, val);
    else if (key == "slide_cooldown") p.slide_cooldown = parse_int(key, val);
    else if (key == "intercept_radius") p.intercept_radius = parse_double(key, val);
    else if (key == "max_ticks") p.max_ticks = parse_int(key, val);
    else if (key == "env_noise_p") p.env_noise_p = parse_double(key, val);
    else throw Error("unknown sim parameter '" + std::string(key) + "'");
  }
  p.check();
  return p;
}

SimParams load_sim_params(const std::string& path, SimParams base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open sim params file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sim_params(ss.str(), base);
}

std::string_view cause_name(TerminationCause::Kind k) {
  switch (k) {
    case TerminationCause::Kind::Goal:
      return "goal";
    case TerminationCause::Kind::BallOut:
      return "ball_out";
    case TerminationCause::Kind::PossessionChange:
      return "possession_change";
    case TerminationCause::Kind::MaxTicks:
      return "max_ticks";
    case TerminationCause::Kind::MonitorTerminate:
      return "monitor";
    case TerminationCause::Kind::BehaviorTerminate:
      return "behavior";
  }
  return "unknown";
}

std::string cause_key(const TerminationCause& c) {
  std::string key(cause_name(c.kind));
  if (c.kind == TerminationCause::Kind::Goal && c.team) key += "_" + std::string(team_name(*c.team));
  return key;
}

namespace {

double move_speed(const PlayerState& pl, bool owns_ball, const SimParams& p) {
  double s = p.base_speed;
  if (pl.sprinting) s *= p.sprint_mult;
  if (pl.dribbling && owns_ball) s *= p.dribble_mult;
  return s;
}

/// Receiver of a heading-targeted pass: the teammate with the smallest
/// angular deviation from the passer's heading (ties by smallest id).
std::optional<PlayerId> pass_receiver(const WorldState& w, const PlayerState& from, Action kind) {
  auto pick = [&](bool require_far) {
    std::optional<PlayerId> best;
    double best_angle = 0.0;
    for (const auto& q : w.players) {
      if (q.team != from.team || q.id == from.id) continue;
      const Vec2 off = q.pos - from.pos;
      if (require_far && norm(off) <= kLongPassMinRange) continue;
      const double a = norm(off) < 1e-12 ? 0.0 : angle_between(from.heading, off);
      if (!best || a < best_angle) {
        best = q.id;
        best_angle = a;
      }
    }
    return best;
  };
  if (kind == Action::LongPass) {
    if (auto far = pick(true)) return far;
  }
  return pick(false);
}

}  // namespace

Vec2 unaimed_shot_target(const PlayerState& kicker, const FieldSpec& field) {
  return attacking_goal(kicker.team) + Vec2{0.0, kicker.heading.y * kShotSpread * field.goal_mouth_half};
}

namespace {

void release(WorldState& w, const PlayerState& kicker, const Command& cmd, const SimParams& p, const FieldSpec& field,
             std::vector<Event>& events) {
  BallState& b = w.ball;
  Vec2 dir = kicker.heading;
  double speed = p.short_pass_speed;
  double vz = 0.0;
  switch (cmd.action) {
    case Action::ShortPass:
    case Action::LongPass:
    case Action::HighPass: {
      if (cmd.aim) {
        dir = normalized(*cmd.aim - kicker.pos, kicker.heading);
      } else if (auto r = pass_receiver(w, kicker, cmd.action)) {
        dir = normalized(w.players[*r].pos - kicker.pos, kicker.heading);
      }
      speed = cmd.action == Action::ShortPass  ? p.short_pass_speed
              : cmd.action == Action::LongPass ? p.long_pass_speed
                                               : p.high_pass_speed;
      if (cmd.action == Action::HighPass) vz = high_pass_vz();
      events.push_back({EventKind::PassReleased, kicker.team, kicker.team, kicker.id, cmd.action});
      break;
    }
    case Action::Shoot: {
      const Vec2 target = cmd.aim ? *cmd.aim : unaimed_shot_target(kicker, field);
      dir = normalized(target - kicker.pos, kicker.heading);
      speed = p.shot_speed;
      events.push_back({EventKind::ShotReleased, kicker.team, kicker.team, kicker.id, Action::Shoot});
      break;
    }
    default:
      return;
  }
  b.owner.reset();
  b.pos = kicker.pos;
  b.height = 0.0;
  b.vx = dir.x * speed;
  b.vy = dir.y * speed;
  b.vz = vz;
  b.last_kicker = kicker.id;
  b.kick_immunity = kKickImmunityTicks;
  w.possession_team.reset();
}

void take_possession(WorldState& w, PlayerId id, std::vector<Event>& events) {
  BallState& b = w.ball;
  const PlayerState& pl = w.players[id];
  b.owner = id;
  b.pos = pl.pos;
  b.height = 0.0;
  b.vx = b.vy = b.vz = 0.0;
  b.kick_immunity = 0;
  events.push_back({EventKind::Touch, pl.team, pl.team, id, Action::Idle});
  if (w.last_possession_team && *w.last_possession_team != pl.team) {
    events.push_back({EventKind::PossessionChange, pl.team, *w.last_possession_team, id, Action::Idle});
  }
  w.possession_team = pl.team;
  w.last_possession_team = pl.team;
}

}  // namespace

std::vector<Event> step_world(WorldState& w, std::span<const Command> cmds, const SimParams& p,
                              const FieldSpec& field, RngStream& rng) {
  const std::size_t n = w.players.size();
  if (cmds.size() < n) throw MissingAction(static_cast<PlayerId>(cmds.size()));
  std::vector<Event> events;

  // (1) environment noise
  std::vector<Command> acts(cmds.begin(), cmds.begin() + static_cast<std::ptrdiff_t>(n));
  if (p.env_noise_p > 0.0) {
    for (auto& c : acts) {
      if (rng.bernoulli(p.env_noise_p)) c = Command(Action::Idle);
    }
  }

  // (2) modal toggles and cooldowns
  for (std::size_t i = 0; i < n; ++i) {
    PlayerState& pl = w.players[i];
    if (pl.slide_cooldown > 0) --pl.slide_cooldown;
    if (acts[i].action == Action::Sprint) pl.sprinting = !pl.sprinting;
    if (acts[i].action == Action::Dribble) pl.dribbling = !pl.dribbling;
  }

  // (3) movement
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_move(acts[i].action)) continue;
    PlayerState& pl = w.players[i];
    pl.heading = direction_vector(move_direction(acts[i].action));
    const bool owns = w.ball.owner == pl.id;
    pl.pos = field.clamp(pl.pos + pl.heading * move_speed(pl, owns, p));
  }

  // (4) ball
  BallState& b = w.ball;
  if (b.kick_immunity > 0) --b.kick_immunity;
  if (b.owner) {
    const PlayerState& owner = w.players[*b.owner];
    b.pos = owner.pos;
    if (is_kick(acts[*b.owner].action)) release(w, owner, acts[*b.owner], p, field, events);
  }
  const Vec2 before = b.pos;
  if (!b.owner) {
    b.pos += b.velocity();
    if (b.height > 0.0 || b.vz > 0.0) {
      b.height += b.vz;
      b.vz -= kGravity;
      if (b.height <= 0.0) {
        b.height = 0.0;
        b.vz = 0.0;
      }
    } else {
      b.vx *= p.ball_friction;
      b.vy *= p.ball_friction;
      if (norm(b.velocity()) < 1e-5) b.vx = b.vy = 0.0;
    }
  }

  // (5) possession of a free, low ball swept along this tick's path
  if (!b.owner && b.height < kCaptureHeight) {
    const double travelled = distance(before, b.pos);
    const double radius = travelled > kFastBallSpeed ? p.intercept_radius : p.control_radius;
    std::optional<PlayerId> best;
    double best_d = 0.0;
    for (const auto& pl : w.players) {
      if (b.kick_immunity > 0 && b.last_kicker == pl.id) continue;
      const double d = distance_to_segment(pl.pos, before, b.pos);
      if (d > radius) continue;
      if (!best || d < best_d) {
        best = pl.id;
        best_d = d;
      }
    }
    if (best) take_possession(w, *best, events);
  }

  // (6) slides
  for (std::size_t i = 0; i < n; ++i) {
    if (acts[i].action != Action::Slide) continue;
    PlayerState& pl = w.players[i];
    if (pl.slide_cooldown > 0) continue;
    pl.slide_cooldown = p.slide_cooldown;
    if (!b.owner) continue;
    const PlayerState& owner = w.players[*b.owner];
    if (owner.team == pl.team) continue;
    const double reach = owner.dribbling ? p.slide_radius * kDribbleShield : p.slide_radius;
    if (distance(owner.pos, pl.pos) > reach) continue;
    events.push_back({EventKind::TackleWon, pl.team, pl.team, pl.id, Action::Idle});
    take_possession(w, pl.id, events);
  }

  // (7) scoring and out of bounds
  if (!b.owner) {
    const bool was_inside = std::abs(before.x) <= field.x_half && std::abs(before.y) <= field.y_half;
    if (was_inside && std::abs(b.pos.x) > field.x_half) {
      const double line = b.pos.x > 0 ? field.x_half : -field.x_half;
      const double t = (line - before.x) / (b.pos.x - before.x);
      const double y_cross = before.y + t * (b.pos.y - before.y);
      if (std::abs(y_cross) <= field.goal_mouth_half && std::abs(y_cross) <= field.y_half && b.height < kGoalHeight) {
        const Team scorer = b.pos.x > 0 ? Team::Left : Team::Right;
        (scorer == Team::Left ? w.score.left : w.score.right) += 1;
        events.push_back({EventKind::Goal, scorer, scorer, b.last_kicker.value_or(-1), Action::Idle});
      } else {
        events.push_back({EventKind::BallOut, Team::Left, Team::Left, -1, Action::Idle});
      }
      b.vx = b.vy = b.vz = 0.0;
    } else if (was_inside && std::abs(b.pos.y) > field.y_half) {
      events.push_back({EventKind::BallOut, Team::Left, Team::Left, -1, Action::Idle});
      b.vx = b.vy = b.vz = 0.0;
    }
  }

  // (8)
  ++w.tick;
  return events;
}

std::optional<PlayerId> detect_possession(const WorldState& w, const SimParams& p) {
  if (w.ball.owner) return w.ball.owner;
  if (w.ball.height >= kCaptureHeight || norm(w.ball.velocity()) > kFastBallSpeed) return std::nullopt;
  return find_nearest_player(w, w.ball.pos, [&](const PlayerState& pl) {
    return distance(pl.pos, w.ball.pos) <= p.control_radius;
  });
}

std::optional<TerminationCause> check_termination(const WorldState& w, std::span<const Event> events,
                                                  const TerminationInputs& in, const SimParams& p) {
  using K = TerminationCause::Kind;
  for (const auto& e : events) {
    if (e.kind == EventKind::Goal) return TerminationCause{K::Goal, e.team};
  }
  for (const auto& e : events) {
    if (e.kind == EventKind::BallOut) return TerminationCause{K::BallOut, std::nullopt};
  }
  if (in.possession_termination) {
    for (const auto& e : events) {
      if (e.kind == EventKind::PossessionChange) return TerminationCause{K::PossessionChange, std::nullopt};
    }
  }
  if (in.monitor_terminate) return TerminationCause{K::MonitorTerminate, std::nullopt};
  if (in.behavior_terminate) return TerminationCause{K::BehaviorTerminate, std::nullopt};
  if (w.tick >= p.max_ticks) return TerminationCause{K::MaxTicks, std::nullopt};
  return std::nullopt;
}

}  // namespace kickoff
