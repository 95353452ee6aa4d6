#include "kickoff/env/env.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kickoff/behavior/builtins.hpp"
#include "kickoff/lang/library.hpp"
#include "kickoff/lang/validate.hpp"

namespace kickoff {

std::string_view reward_mode_name(RewardMode m) {
  return m == RewardMode::Scoring ? "scoring" : "scoring+monitors";
}

std::optional<RewardMode> reward_mode_from_name(std::string_view name) {
  if (name == "scoring") return RewardMode::Scoring;
  if (name == "scoring+monitors") return RewardMode::ScoringPlusMonitors;
  return std::nullopt;
}

std::string read_scenario_source(const std::string& source) {
  std::error_code ec;
  if (source.find('\n') == std::string::npos && std::filesystem::is_regular_file(source, ec)) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw Error("cannot read " + source);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  return source;
}

std::shared_ptr<const CompiledScenario> compile_scenario(std::string_view text, std::string name,
                                                         const FieldSpec& field) {
  auto out = std::make_shared<CompiledScenario>();
  out->name = std::move(name);
  out->field = field;
  out->program = lang::load_program(text, out->field);
  return out;
}

std::shared_ptr<const CompiledScenario> load_scenario(const std::string& path_or_text) {
  const bool is_file = path_or_text.find('\n') == std::string::npos && std::filesystem::is_regular_file(path_or_text);
  return compile_scenario(read_scenario_source(path_or_text),
                          is_file ? std::filesystem::path(path_or_text).stem().string() : std::string("inline"));
}

std::vector<PlayerId> select_controlled_players(const WorldState& w, Team rl_team, int n) {
  std::vector<PlayerId> team;
  int outfield = 0;
  for (const auto& p : w.players) {
    if (p.team != rl_team) continue;
    team.push_back(p.id);
    if (p.role != Role::GK) ++outfield;
  }
  const bool keep_gk = outfield < n;
  std::vector<PlayerId> pool;
  for (PlayerId id : team) {
    const PlayerState& p = w.players[id];
    if (p.role == Role::GK && !keep_gk && w.ball.owner != id) continue;
    pool.push_back(id);
  }
  std::stable_sort(pool.begin(), pool.end(), [&](PlayerId a, PlayerId b) {
    const double da = distance_squared(w.players[a].pos, w.ball.pos);
    const double db = distance_squared(w.players[b].pos, w.ball.pos);
    return da < db || (da == db && a < b);
  });
  if (static_cast<int>(pool.size()) > n) pool.resize(static_cast<std::size_t>(n));
  return pool;
}

double compute_reward(std::span<const Event> events, double monitor_sum, RewardMode mode, Team rl_team) {
  double r = 0.0;
  for (const auto& e : events) {
    if (e.kind != EventKind::Goal) continue;
    r = e.team == rl_team ? 1.0 : -1.0;
    break;
  }
  if (mode == RewardMode::ScoringPlusMonitors) r += monitor_sum;
  return r;
}

RngStream episode_stream(std::uint64_t master_seed, std::uint64_t episode_index, EpisodeStream s) {
  return RngStream(episode_seed(master_seed, episode_index)).split(static_cast<std::uint64_t>(s));
}

Environment::Environment(std::shared_ptr<const CompiledScenario> scenario, EpisodeConfig cfg)
    : scenario_(std::move(scenario)), cfg_(std::move(cfg)), sim_(cfg_.sim) {
  if (!scenario_) throw Error("environment needs a scenario");
  cfg_.sim.check();
  if (cfg_.n_rl_agents < 1) throw Error("n_rl_agents must be at least 1");
}

Environment::Environment(Environment&&) noexcept = default;
Environment& Environment::operator=(Environment&&) noexcept = default;
Environment::~Environment() = default;

const SmmTensor& Environment::reset(std::uint64_t episode_index) {
  started_ = false;
  done_ = false;
  episode_ = episode_index;
  const auto& program = scenario_->program;
  const FieldSpec& field = scenario_->field;

  RngStream scene_rng = episode_stream(cfg_.master_seed, episode_index, EpisodeStream::Scene);
  scene_ = sample_scene(program, field, scene_rng, cfg_.max_rejections);
  sim_rng_ = episode_stream(cfg_.master_seed, episode_index, EpisodeStream::Sim);
  behavior_rng_ = episode_stream(cfg_.master_seed, episode_index, EpisodeStream::Behavior);
  policy_rng_ = episode_stream(cfg_.master_seed, episode_index, EpisodeStream::ScenicPolicy);

  sim_ = cfg_.sim;
  possession_termination_ = true;
  if (auto i = program.find_param(lang::kParamPossessionTermination)) {
    possession_termination_ = lang::as_bool(scene_.params.at(*i));
  }
  if (auto i = program.find_param(lang::kParamMaxTicks)) {
    sim_.max_ticks = static_cast<int>(std::lround(lang::as_number(scene_.params.at(*i))));
  }

  const int on_team = static_cast<int>(std::count_if(scene_.players.begin(), scene_.players.end(),
                                                     [&](const ScenePlayer& p) { return p.team == cfg_.rl_team; }));
  if (on_team < cfg_.n_rl_agents) {
    throw Error("scenario fields " + std::to_string(on_team) + " players on the RL team, fewer than n_rl_agents = " +
                std::to_string(cfg_.n_rl_agents));
  }

  world_ = scene_to_world(scene_, sim_.control_radius);
  env_ = scene_env(scene_, program, field);
  behaviors_.clear();
  behaviors_.resize(scene_.players.size());
  policy_.reset();
  for (std::size_t i = 0; i < scene_.players.size(); ++i) {
    const ScenePlayer& p = scene_.players[i];
    if (!p.behavior) continue;
    if (p.controller.kind == Controller::Kind::Behavior) behaviors_[i].emplace(program, *p.behavior);
    if (scene_.ego && static_cast<std::size_t>(*scene_.ego) == i) policy_.emplace(program, *p.behavior);
  }
  joint_.assign(world_.players.size(), Command(Action::Idle));
  select();
  encode_smm(world_, controlled_, obs_);
  started_ = true;
  return obs_;
}

void Environment::select() { controlled_ = select_controlled_players(world_, cfg_.rl_team, cfg_.n_rl_agents); }

bool Environment::has_policy_behavior() const { return policy_.has_value(); }

Command Environment::policy_command(PlayerId self) {
  if (!started_) throw NoEpisode();
  if (!policy_) return Command(Action::Idle);
  return policy_->step(behavior::BehaviorContext{&env_, &world_, &sim_, &policy_rng_}, self);
}

StepResult Environment::step(std::span<const int> rl_actions) {
  if (!started_) throw NoEpisode();
  if (done_) throw EpisodeDone();
  std::vector<Command> cmds;
  cmds.reserve(rl_actions.size());
  for (int code : rl_actions) {
    const auto a = action_from_code(code);
    if (!a) throw BadActionCode("action code " + std::to_string(code) + " is outside 0..15");
    cmds.emplace_back(*a);
  }
  return step_commands(cmds);
}

StepResult Environment::step_commands(std::span<const Command> rl_commands) {
  if (!started_) throw NoEpisode();
  if (done_) throw EpisodeDone();
  if (rl_commands.size() != controlled_.size()) {
    throw BadActionCode("expected " + std::to_string(controlled_.size()) + " actions, got " +
                        std::to_string(rl_commands.size()));
  }
  const FieldSpec& field = scenario_->field;
  const behavior::BehaviorContext bctx{&env_, &world_, &sim_, &behavior_rng_};
  bool behavior_terminate = false;
  for (std::size_t i = 0; i < world_.players.size(); ++i) {
    const PlayerId id = static_cast<PlayerId>(i);
    if (std::find(controlled_.begin(), controlled_.end(), id) != controlled_.end()) continue;
    if (behaviors_[i]) {
      joint_[i] = behaviors_[i]->step(bctx, id);
      behavior_terminate = behavior_terminate || behaviors_[i]->terminate_requested();
    } else {
      joint_[i] = behavior::rule_bot(world_, id, sim_, field);
    }
  }
  for (std::size_t k = 0; k < controlled_.size(); ++k) joint_[controlled_[k]] = rl_commands[k];

  const std::vector<Event> events = step_world(world_, joint_, sim_, field, sim_rng_);

  lang::EvalContext mctx;
  mctx.env = &env_;
  mctx.world = &world_;
  mctx.rng = &behavior_rng_;
  double monitor_sum = 0.0;
  bool monitor_terminate = false;
  for (const auto& m : scenario_->program.monitors) {
    const auto r = behavior::step_monitor(m, mctx);
    monitor_sum += r.reward;
    monitor_terminate = monitor_terminate || r.terminate;
  }
  for (const auto& cond : scenario_->program.terminate_when) {
    if (lang::eval_bool(cond, mctx)) monitor_terminate = true;
  }

  StepResult out;
  out.reward = compute_reward(events, monitor_sum, cfg_.reward_mode, cfg_.rl_team);
  select();
  out.info.cause = check_termination(world_, events,
                                     TerminationInputs{monitor_terminate, behavior_terminate, possession_termination_}, sim_);
  out.done = out.info.cause.has_value();
  done_ = out.done;
  encode_smm(world_, controlled_, obs_);
  out.obs = obs_;
  out.info.score = world_.score;
  out.info.tick = world_.tick;
  out.info.monitor_reward = monitor_sum;
  out.info.controlled = controlled_;
  return out;
}

void TraceHash::bytes(const void* p, std::size_t n) {
  const auto* b = static_cast<const std::uint8_t*>(p);
  for (std::size_t i = 0; i < n; ++i) {
    h_ ^= b[i];
    h_ *= 0x100000001b3ULL;
  }
}

void TraceHash::add_reset(const SmmTensor& obs) { bytes(obs.bytes().data(), obs.bytes().size()); }

void TraceHash::add_step(const SmmTensor& obs, double reward, bool done) {
  bytes(obs.bytes().data(), obs.bytes().size());
  const auto bits = std::bit_cast<std::uint64_t>(reward);
  std::uint8_t le[8];
  for (int i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(bits >> (8 * i));
  bytes(le, 8);
  const std::uint8_t d = done ? 1 : 0;
  bytes(&d, 1);
}

void TraceHash::add_step(const StepResult& r) { add_step(r.obs, r.reward, r.done); }

FrameStack::FrameStack(int k) : k_(k) {
  if (k < 1) throw Error("frame_stack must be at least 1");
}

void FrameStack::reset(const SmmTensor& obs) { frames_.assign(static_cast<std::size_t>(k_), obs); }

void FrameStack::push(const SmmTensor& obs) {
  if (frames_.empty()) {
    reset(obs);
    return;
  }
  frames_.pop_front();
  frames_.push_back(obs);
}

std::vector<std::uint8_t> FrameStack::packed() const {
  std::vector<std::uint8_t> out;
  out.reserve(frames_.size() * SmmTensor::kBytes);
  for (const auto& f : frames_) out.insert(out.end(), f.bytes().begin(), f.bytes().end());
  return out;
}

bool FrameStack::get(int channel, int row, int col) const {
  const auto& f = frames_.at(static_cast<std::size_t>(channel / SmmTensor::kChannels));
  return f.get(channel % SmmTensor::kChannels, row, col);
}

}  // namespace kickoff
