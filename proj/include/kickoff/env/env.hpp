#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kickoff/behavior/engine.hpp"
#include "kickoff/env/smm.hpp"
#include "kickoff/lang/ast.hpp"
#include "kickoff/sampler/sampler.hpp"
#include "kickoff/sim/sim.hpp"

namespace kickoff {

enum class RewardMode { Scoring, ScoringPlusMonitors };

/// "scoring" / "scoring+monitors".
std::string_view reward_mode_name(RewardMode m);
std::optional<RewardMode> reward_mode_from_name(std::string_view name);

/// A validated program plus the scenario-level flags read from its reserved
/// parameters. Immutable and shareable across episodes.
struct CompiledScenario {
  std::string name;
  lang::Program program;
  FieldSpec field;
};

/// Reads `source` as a file when such a file exists, else treats it as
/// program text.
std::string read_scenario_source(const std::string& source);
/// Throws LexError, ParseError or ValidationError.
std::shared_ptr<const CompiledScenario> compile_scenario(std::string_view text, std::string name = {},
                                                         const FieldSpec& field = FieldSpec::standard());
std::shared_ptr<const CompiledScenario> load_scenario(const std::string& path_or_text);

struct EpisodeConfig {
  std::uint64_t master_seed = 0;
  RewardMode reward_mode = RewardMode::Scoring;
  Team rl_team = Team::Left;
  int n_rl_agents = 1;
  SimParams sim;
  int max_rejections = kDefaultMaxRejections;
};

struct StepInfo {
  Score score;
  int tick = 0;
  std::optional<TerminationCause> cause;
  double monitor_reward = 0.0;
  std::vector<PlayerId> controlled;
};

struct StepResult {
  SmmTensor obs;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

class EpisodeDone : public Error {
 public:
  EpisodeDone() : Error("episode is done; call reset") {}
};
class NoEpisode : public Error {
 public:
  NoEpisode() : Error("no episode in progress; call reset") {}
};
class BadActionCode : public Error {
 public:
  using Error::Error;
};

/// The n rl_team players nearest the ball (ties by smallest id), nearest
/// first. The keeper is skipped unless it owns the ball or fewer than n
/// outfielders exist.
std::vector<PlayerId> select_controlled_players(const WorldState& w, Team rl_team, int n);

/// +1 for a goal by rl_team, -1 for a goal against, plus the monitor sum in
/// ScoringPlusMonitors mode.
double compute_reward(std::span<const Event> events, double monitor_sum, RewardMode mode, Team rl_team);

/// Root-level independent rng streams of one episode. ScenicPolicy feeds
/// only the ego's scripted policy, so runs with and without it keep the
/// other streams aligned.
enum class EpisodeStream : std::uint64_t { Scene = 0, Sim = 1, Behavior = 2, ScenicPolicy = 3, Policy = 4 };
RngStream episode_stream(std::uint64_t master_seed, std::uint64_t episode_index, EpisodeStream s);

/// One reset/step environment over a compiled scenario.
class Environment {
 public:
  Environment(std::shared_ptr<const CompiledScenario> scenario, EpisodeConfig cfg);
  Environment(Environment&&) noexcept;
  Environment& operator=(Environment&&) noexcept;
  ~Environment();

  /// Samples episode `episode_index` and returns its initial observation.
  /// Throws Unsatisfiable or the evaluator's errors.
  const SmmTensor& reset(std::uint64_t episode_index);

  /// One tick with RL action codes for the controlled players, nearest first.
  StepResult step(std::span<const int> rl_actions);
  /// As step() with full commands for the controlled players.
  StepResult step_commands(std::span<const Command> rl_commands);

  /// The ego's scene behavior, driving `self`; Idle when the ego has none.
  Command policy_command(PlayerId self);
  bool has_policy_behavior() const;

  bool in_episode() const { return started_; }
  bool done() const { return done_; }
  const WorldState& world() const { return world_; }
  const Scene& scene() const { return scene_; }
  const std::vector<PlayerId>& controlled() const { return controlled_; }
  const SmmTensor& observation() const { return obs_; }
  const EpisodeConfig& config() const { return cfg_; }
  const CompiledScenario& scenario() const { return *scenario_; }
  std::uint64_t episode_index() const { return episode_; }
  /// Effective tick cap and possession rule of the current episode.
  const SimParams& sim() const { return sim_; }
  bool possession_termination() const { return possession_termination_; }

 private:
  void select();

  std::shared_ptr<const CompiledScenario> scenario_;
  EpisodeConfig cfg_;
  SimParams sim_;
  bool possession_termination_ = true;
  std::uint64_t episode_ = 0;
  bool started_ = false;
  bool done_ = false;

  Scene scene_;
  WorldState world_;
  lang::EvalEnv env_;
  RngStream sim_rng_;
  RngStream behavior_rng_;
  RngStream policy_rng_;
  std::vector<std::optional<behavior::BehaviorInstance>> behaviors_;
  std::optional<behavior::BehaviorInstance> policy_;
  std::vector<PlayerId> controlled_;
  SmmTensor obs_;
  std::vector<Command> joint_;
};

/// FNV-1a over the (obs, reward, done) stream of an episode.
class TraceHash {
 public:
  void add_reset(const SmmTensor& obs);
  void add_step(const StepResult& r);
  void add_step(const SmmTensor& obs, double reward, bool done);
  std::uint64_t value() const { return h_; }

 private:
  void bytes(const void* p, std::size_t n);
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

/// Channel-concatenated history of the last k observations, oldest first.
class FrameStack {
 public:
  explicit FrameStack(int k);
  void reset(const SmmTensor& obs);
  void push(const SmmTensor& obs);
  int depth() const { return k_; }
  /// k * SmmTensor::kBytes bytes.
  std::vector<std::uint8_t> packed() const;
  bool get(int channel, int row, int col) const;

 private:
  int k_;
  std::deque<SmmTensor> frames_;
};

}  // namespace kickoff
