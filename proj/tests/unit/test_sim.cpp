#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "kickoff/core/rng.hpp"
#include "kickoff/sim/sim.hpp"

using namespace kickoff;

namespace {

const FieldSpec& field() { return FieldSpec::standard(); }

PlayerState make_player(PlayerId id, Team team, Role role, Vec2 pos) {
  PlayerState p;
  p.id = id;
  p.team = team;
  p.role = role;
  p.pos = pos;
  p.heading = attack_direction(team);
  return p;
}

WorldState world_of(std::vector<PlayerState> players, Vec2 ball, std::optional<PlayerId> owner = std::nullopt) {
  WorldState w;
  w.players = std::move(players);
  w.ball.pos = ball;
  w.ball.owner = owner;
  if (owner) {
    w.ball.pos = w.players[*owner].pos;
    w.possession_team = w.players[*owner].team;
    w.last_possession_team = w.possession_team;
  }
  return w;
}

std::vector<Event> step(WorldState& w, std::vector<Command> cmds, const SimParams& p = {}) {
  RngStream rng(0);
  return step_world(w, cmds, p, field(), rng);
}

bool has_event(const std::vector<Event>& ev, EventKind k) {
  return std::any_of(ev.begin(), ev.end(), [&](const Event& e) { return e.kind == k; });
}

WorldState random_world(RngStream& rng, int per_team) {
  std::vector<PlayerState> ps;
  for (int t = 0; t < 2; ++t) {
    for (int i = 0; i < per_team; ++i) {
      const Role role = i == 0 ? Role::GK : kAllRoles[1 + rng.index(kAllRoles.size() - 1)];
      ps.push_back(make_player(static_cast<PlayerId>(ps.size()), t == 0 ? Team::Left : Team::Right, role,
                               {rng.uniform(-1.0, 1.0), rng.uniform(-0.42, 0.42)}));
    }
  }
  std::optional<PlayerId> owner;
  if (rng.bernoulli(0.5)) owner = static_cast<PlayerId>(rng.index(ps.size()));
  return world_of(std::move(ps), {rng.uniform(-0.9, 0.9), rng.uniform(-0.4, 0.4)}, owner);
}

std::multiset<std::pair<Team, Role>> roster(const WorldState& w) {
  std::multiset<std::pair<Team, Role>> out;
  for (const auto& p : w.players) out.insert({p.team, p.role});
  return out;
}

}  // namespace

TEST(SimParams, DefaultsAreValid) {
  SimParams p;
  EXPECT_NO_THROW(p.check());
  p.shot_speed = 0.0;
  EXPECT_THROW(p.check(), Error);
  p = {};
  p.env_noise_p = 1.5;
  EXPECT_THROW(p.check(), Error);
}

TEST(SimParams, ParsesKeyValueText) {
  const SimParams p = parse_sim_params("# tuning\nbase_speed = 0.01\n\nmax_ticks=120\nenv_noise_p = 0.25\n");
  EXPECT_EQ(p.base_speed, 0.01);
  EXPECT_EQ(p.max_ticks, 120);
  EXPECT_EQ(p.env_noise_p, 0.25);
  EXPECT_EQ(p.shot_speed, SimParams{}.shot_speed);
  EXPECT_THROW(parse_sim_params("warp_speed = 9"), Error);
  EXPECT_THROW(parse_sim_params("base_speed = fast"), Error);
  EXPECT_THROW(parse_sim_params("base_speed = -1"), Error);
}

TEST(Kinematics, MoveEast) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CM, {0, 0})}, {0.5, 0.3});
  step(w, {Command(Action::MoveE)});
  EXPECT_NEAR(w.players[0].pos.x, 0.008, 1e-15);
  EXPECT_EQ(w.players[0].pos.y, 0.0);
  EXPECT_EQ(w.tick, 1);
}

TEST(Kinematics, SprintAndDribbleMultipliers) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CM, {0, 0})}, {0, 0}, 0);
  step(w, {Command(Action::Sprint)});
  step(w, {Command(Action::Dribble)});
  EXPECT_TRUE(w.players[0].sprinting);
  EXPECT_TRUE(w.players[0].dribbling);
  step(w, {Command(Action::MoveN)});
  EXPECT_NEAR(w.players[0].pos.y, 0.008 * 1.5 * 0.8, 1e-15);
  EXPECT_EQ(w.players[0].heading, direction_vector(Compass::N));
  EXPECT_EQ(w.ball.pos, w.players[0].pos);
  step(w, {Command(Action::Sprint)});
  EXPECT_FALSE(w.players[0].sprinting);
}

TEST(Kinematics, ClampedToField) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CM, {0.998, 0.419})}, {0, 0});
  step(w, {Command(Action::MoveNE)});
  EXPECT_EQ(w.players[0].pos, (Vec2{1.0, 0.42}));
}

TEST(Kinematics, SprintCrossingTimeMatchesDesign) {
  // 2.0 / (0.008 * 1.5) ticks to cross the pitch.
  EXPECT_NEAR(2.0 / (SimParams{}.base_speed * SimParams{}.sprint_mult), 166.7, 0.1);
}

TEST(Shooting, UnopposedShotScoresWithinClosedFormBound) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CF, {0.9, 0})}, {0.9, 0}, 0);
  const SimParams p;
  const int bound = static_cast<int>(std::ceil(0.1 / p.shot_speed));
  std::vector<Event> ev = step(w, {Command(Action::Shoot)});
  EXPECT_TRUE(has_event(ev, EventKind::ShotReleased));
  int ticks = 1;
  while (!has_event(ev, EventKind::Goal) && ticks < 10) {
    ev = step(w, {Command(Action::Idle)});
    ++ticks;
  }
  EXPECT_TRUE(has_event(ev, EventKind::Goal));
  EXPECT_LE(ticks, bound);
  EXPECT_EQ(w.score.left, 1);
  EXPECT_EQ(w.score.right, 0);
  EXPECT_FALSE(has_event(ev, EventKind::BallOut));
}

TEST(Shooting, RightTeamScoresOnLeftGoal) {
  WorldState w = world_of({make_player(0, Team::Right, Role::CF, {-0.9, 0})}, {0, 0}, 0);
  std::vector<Event> ev;
  for (int i = 0; i < 3 && !has_event(ev, EventKind::Goal); ++i) ev = step(w, {Command(i == 0 ? Action::Shoot : Action::Idle)});
  EXPECT_TRUE(has_event(ev, EventKind::Goal));
  EXPECT_EQ(w.score.right, 1);
}

TEST(Shooting, AimedWideIsBallOut) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CF, {0.9, 0})}, {0, 0}, 0);
  w.ball.owner = 0;
  std::vector<Event> ev;
  for (int i = 0; i < 4 && !has_event(ev, EventKind::BallOut); ++i) {
    ev = step(w, {i == 0 ? Command(Action::Shoot, Vec2{1.0, 0.1}) : Command(Action::Idle)});
  }
  EXPECT_TRUE(has_event(ev, EventKind::BallOut));
  EXPECT_FALSE(has_event(ev, EventKind::Goal));
}

TEST(Shooting, UnaimedShotFollowsLateralHeading) {
  PlayerState p = make_player(0, Team::Left, Role::CF, {0.8, 0.0});
  EXPECT_EQ(unaimed_shot_target(p, field()), (Vec2{1.0, 0.0}));
  p.heading = normalized(Vec2{1.0, 1.0});
  const Vec2 t = unaimed_shot_target(p, field());
  EXPECT_DOUBLE_EQ(t.x, 1.0);
  EXPECT_NEAR(t.y, std::sqrt(0.5) * kShotSpread * field().goal_mouth_half, 1e-12);
  p.heading = {0.0, -1.0};
  EXPECT_NEAR(unaimed_shot_target(p, field()).y, -kShotSpread * field().goal_mouth_half, 1e-12);
  EXPECT_LE(std::abs(unaimed_shot_target(p, field()).y), field().goal_mouth_half);
  PlayerState r = make_player(1, Team::Right, Role::CF, {-0.8, 0.0});
  r.heading = normalized(Vec2{-1.0, 1.0});
  EXPECT_DOUBLE_EQ(unaimed_shot_target(r, field()).x, -1.0);
  EXPECT_GT(unaimed_shot_target(r, field()).y, 0.0);
}

TEST(Ball, FreeBallOverTouchlineIsOut) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CM, {0, 0})}, {0.99, 0.4});
  w.ball.vx = 0.02;
  w.ball.vy = 0.02;
  const auto ev = step(w, {Command(Action::Idle)});
  EXPECT_TRUE(has_event(ev, EventKind::BallOut));
  EXPECT_FALSE(has_event(ev, EventKind::Goal));
}

TEST(Ball, FrictionDecaysFreeBall) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CM, {-0.8, 0})}, {0, 0});
  w.ball.vx = 0.01;
  step(w, {Command(Action::Idle)});
  EXPECT_NEAR(w.ball.pos.x, 0.01, 1e-15);
  EXPECT_NEAR(w.ball.vx, 0.01 * 0.96, 1e-15);
}

TEST(Ball, HighPassIsAboveCaptureHeightForTwelveTicks) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CB, {-0.5, 0}),
                           make_player(1, Team::Left, Role::CF, {0.3, 0})},
                          {0, 0}, 0);
  step(w, {Command(Action::HighPass), Command(Action::Idle)});
  int airborne = w.ball.height >= kCaptureHeight ? 1 : 0;
  for (int t = 2; t <= 30 && !w.ball.owner; ++t) {
    step(w, {Command(Action::Idle), Command(Action::Idle)});
    if (w.ball.height >= kCaptureHeight) {
      ++airborne;
      EXPECT_LE(t, kHighPassAirTicks);
    }
  }
  EXPECT_EQ(airborne, kHighPassAirTicks);
}

TEST(Ball, HighPassFliesOverDefender) {
  // Defender sits on the flight line 0.12 from the passer, reached on tick 3.
  WorldState w = world_of({make_player(0, Team::Left, Role::CB, {-0.5, 0}),
                           make_player(1, Team::Left, Role::CF, {0.0, 0}),
                           make_player(2, Team::Right, Role::CB, {-0.38, 0})},
                          {0, 0}, 0);
  for (int t = 0; t < 6; ++t) {
    const auto ev = step(w, {Command(t == 0 ? Action::HighPass : Action::Idle), Command(Action::Idle),
                             Command(Action::Idle)});
    EXPECT_FALSE(has_event(ev, EventKind::PossessionChange));
  }
  EXPECT_NE(w.ball.owner, PlayerId{2});
}

TEST(Ball, GroundPassIsIntercepted) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CB, {-0.5, 0}),
                           make_player(1, Team::Left, Role::CF, {0.0, 0}),
                           make_player(2, Team::Right, Role::CB, {-0.38, 0})},
                          {0, 0}, 0);
  bool changed = false;
  for (int t = 0; t < 8 && !changed; ++t) {
    const auto ev = step(w, {Command(t == 0 ? Action::ShortPass : Action::Idle), Command(Action::Idle),
                             Command(Action::Idle)});
    changed = has_event(ev, EventKind::PossessionChange);
  }
  EXPECT_TRUE(changed);
  EXPECT_EQ(w.ball.owner, PlayerId{2});
}

TEST(Ball, PassTargetsSmallestAngularDeviation) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CM, {0, 0}),
                           make_player(1, Team::Left, Role::LM, {0.1, 0.2}),
                           make_player(2, Team::Left, Role::CF, {0.2, 0.01})},
                          {0, 0}, 0);
  step(w, {Command(Action::ShortPass), Command(Action::Idle), Command(Action::Idle)});
  const Vec2 v = w.ball.velocity();
  EXPECT_NEAR(std::atan2(v.y, v.x), std::atan2(0.01, 0.2), 1e-12);
}

TEST(Ball, LongPassPrefersFarReceiver) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CM, {0, 0}),
                           make_player(1, Team::Left, Role::AM, {0.1, 0.0}),
                           make_player(2, Team::Left, Role::CF, {0.5, 0.1})},
                          {0, 0}, 0);
  step(w, {Command(Action::LongPass), Command(Action::Idle), Command(Action::Idle)});
  const Vec2 v = w.ball.velocity();
  EXPECT_NEAR(std::atan2(v.y, v.x), std::atan2(0.1, 0.5), 1e-12);
  EXPECT_NEAR(norm(v), SimParams{}.long_pass_speed * SimParams{}.ball_friction, 1e-12);
}

TEST(Ball, KickerCannotRecaptureImmediately) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CM, {0, 0})}, {0, 0}, 0);
  const auto ev = step(w, {Command(Action::ShortPass)});
  EXPECT_TRUE(has_event(ev, EventKind::PassReleased));
  EXPECT_FALSE(w.ball.owner.has_value());
}

TEST(Possession, NearestCapturesTiesBySmallestId) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CM, {0.02, 0}),
                           make_player(1, Team::Right, Role::CM, {-0.02, 0})},
                          {0, 0});
  EXPECT_EQ(detect_possession(w, SimParams{}), PlayerId{0});
  const auto ev = step(w, {Command(Action::Idle), Command(Action::Idle)});
  EXPECT_EQ(w.ball.owner, PlayerId{0});
  EXPECT_TRUE(has_event(ev, EventKind::Touch));
  EXPECT_FALSE(has_event(ev, EventKind::PossessionChange));
}

TEST(Possession, HighBallHasNoOwner) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CM, {0, 0})}, {0, 0});
  w.ball.height = 0.05;
  EXPECT_FALSE(detect_possession(w, SimParams{}).has_value());
  w.ball.height = 0.0;
  EXPECT_EQ(detect_possession(w, SimParams{}), PlayerId{0});
}

TEST(Slide, StealsWithinRadiusAndSetsCooldown) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CF, {0, 0}),
                           make_player(1, Team::Right, Role::CB, {0.03, 0})},
                          {0, 0}, 0);
  const auto ev = step(w, {Command(Action::Idle), Command(Action::Slide)});
  EXPECT_TRUE(has_event(ev, EventKind::TackleWon));
  EXPECT_TRUE(has_event(ev, EventKind::PossessionChange));
  EXPECT_EQ(w.ball.owner, PlayerId{1});
  EXPECT_EQ(w.players[1].slide_cooldown, SimParams{}.slide_cooldown);
}

TEST(Slide, DribblingHalvesReach) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CF, {0, 0}),
                           make_player(1, Team::Right, Role::CB, {0.03, 0})},
                          {0, 0}, 0);
  w.players[0].dribbling = true;
  const auto ev = step(w, {Command(Action::Idle), Command(Action::Slide)});
  EXPECT_FALSE(has_event(ev, EventKind::TackleWon));
  EXPECT_EQ(w.ball.owner, PlayerId{0});
  const auto again = step(w, {Command(Action::Idle), Command(Action::Slide)});
  EXPECT_FALSE(has_event(again, EventKind::TackleWon));
  EXPECT_EQ(w.players[1].slide_cooldown, SimParams{}.slide_cooldown - 1);
}

TEST(Noise, FullNoiseReplacesEveryAction) {
  SimParams p;
  p.env_noise_p = 1.0;
  WorldState w = world_of({make_player(0, Team::Left, Role::CM, {0, 0})}, {0.5, 0});
  RngStream rng(1);
  step_world(w, std::vector<Command>{Command(Action::MoveE)}, p, field(), rng);
  EXPECT_EQ(w.players[0].pos, (Vec2{0, 0}));
}

TEST(Step, MissingActionThrows) {
  WorldState w = world_of({make_player(0, Team::Left, Role::CM, {0, 0}), make_player(1, Team::Right, Role::CM, {0.5, 0})},
                          {0, 0});
  RngStream rng(1);
  EXPECT_THROW(step_world(w, std::vector<Command>{Command(Action::Idle)}, SimParams{}, field(), rng), MissingAction);
}

TEST(Termination, PriorityOrder) {
  const SimParams p;
  WorldState w;
  const std::vector<Event> goal = {{EventKind::PossessionChange, Team::Right, Team::Left, 1, Action::Idle},
                                   {EventKind::Goal, Team::Left, Team::Left, 0, Action::Idle}};
  auto c = check_termination(w, goal, {}, p);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->kind, TerminationCause::Kind::Goal);
  EXPECT_EQ(c->team, Team::Left);
  EXPECT_EQ(cause_key(*c), "goal_left");

  const std::vector<Event> pc = {{EventKind::PossessionChange, Team::Right, Team::Left, 1, Action::Idle}};
  EXPECT_EQ(check_termination(w, pc, {}, p)->kind, TerminationCause::Kind::PossessionChange);
  TerminationInputs no_pc;
  no_pc.possession_termination = false;
  EXPECT_FALSE(check_termination(w, pc, no_pc, p).has_value());

  TerminationInputs both{true, true, true};
  EXPECT_EQ(check_termination(w, {}, both, p)->kind, TerminationCause::Kind::MonitorTerminate);
  w.tick = p.max_ticks;
  EXPECT_EQ(check_termination(w, {}, {}, p)->kind, TerminationCause::Kind::MaxTicks);
  w.tick = p.max_ticks - 1;
  EXPECT_FALSE(check_termination(w, {}, {}, p).has_value());
}

TEST(Termination, CauseNames) {
  using K = TerminationCause::Kind;
  EXPECT_EQ(cause_name(K::Goal), "goal");
  EXPECT_EQ(cause_name(K::BallOut), "ball_out");
  EXPECT_EQ(cause_name(K::PossessionChange), "possession_change");
  EXPECT_EQ(cause_name(K::MaxTicks), "max_ticks");
  EXPECT_EQ(cause_name(K::MonitorTerminate), "monitor");
  EXPECT_EQ(cause_name(K::BehaviorTerminate), "behavior");
}

TEST(Invariants, RandomRollouts) {
  const SimParams p;
  RngStream meta(2024);
  for (int episode = 0; episode < 200; ++episode) {
    RngStream rng = meta.split(static_cast<std::uint64_t>(episode));
    WorldState w = random_world(rng, 1 + static_cast<int>(rng.index(5)));
    const auto cast = roster(w);
    for (int t = 0; t < 200; ++t) {
      std::vector<Command> cmds;
      for (std::size_t i = 0; i < w.players.size(); ++i) {
        cmds.emplace_back(static_cast<Action>(rng.index(kActionCount)));
      }
      const Score before = w.score;
      const auto prev_team = w.last_possession_team;
      const auto ev = step_world(w, cmds, p, field(), rng);
      ASSERT_EQ(roster(w), cast);
      for (std::size_t i = 0; i < w.players.size(); ++i) ASSERT_EQ(w.players[i].id, static_cast<PlayerId>(i));
      if (w.ball.owner) ASSERT_LE(distance(w.ball.pos, w.players[*w.ball.owner].pos), p.control_radius);
      ASSERT_GE(w.score.left, before.left);
      ASSERT_GE(w.score.right, before.right);
      const int goals = static_cast<int>(std::count_if(ev.begin(), ev.end(), [](const Event& e) { return e.kind == EventKind::Goal; }));
      ASSERT_EQ((w.score.left - before.left) + (w.score.right - before.right), goals);
      ASSERT_LE(goals, 1);
      ASSERT_FALSE(goals == 1 && has_event(ev, EventKind::BallOut));
      for (const auto& e : ev) {
        if (e.kind != EventKind::PossessionChange) continue;
        ASSERT_TRUE(prev_team.has_value());
        ASSERT_EQ(e.from, *prev_team);
        ASSERT_NE(e.team, e.from);
        ASSERT_EQ(w.players[e.player].team, e.team);
      }
      for (const auto& pl : w.players) ASSERT_TRUE(field().in_bounds(pl.pos));
      if (has_event(ev, EventKind::Goal) || has_event(ev, EventKind::BallOut)) break;
    }
  }
}

TEST(Determinism, IdenticalThousandTickTraces) {
  const SimParams p = [] {
    SimParams q;
    q.env_noise_p = 0.1;
    return q;
  }();
  auto run = [&](std::uint64_t seed) {
    RngStream rng(seed);
    WorldState w = random_world(rng, 4);
    std::vector<WorldState> trace;
    for (int t = 0; t < 1000; ++t) {
      std::vector<Command> cmds;
      for (std::size_t i = 0; i < w.players.size(); ++i) cmds.emplace_back(static_cast<Action>(rng.index(kActionCount)));
      step_world(w, cmds, p, field(), rng);
      trace.push_back(w);
    }
    return trace;
  };
  EXPECT_EQ(run(77), run(77));
  EXPECT_NE(run(77), run(78));
}
