#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kickoff/env/env.hpp"

namespace kickoff::suite {

/// Academy holds the reference training scenarios paired with academy
/// generalization tests that have no policy entry of their own.
enum class Category { Offense, Defense, GeneralizationTest, SemiExpertPolicy, Academy };

std::string_view category_name(Category c);
std::optional<Category> category_from_name(std::string_view name);

struct CatalogEntry {
  std::string name;
  Category category = Category::Offense;
  /// Absolute path of the `.scn` file.
  std::string path;
  std::string description;
  /// Name of the training entry, for generalization tests only.
  std::optional<std::string> paired_train;
};

class AssetMissing : public Error {
 public:
  explicit AssetMissing(std::string path) : Error("missing scenario asset: " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Catalog index file inside an asset directory.
inline constexpr std::string_view kCatalogFile = "scenarios/catalog.json";

/// Reads `<asset_dir>/scenarios/catalog.json`. Throws AssetMissing for the
/// index or any listed file, and Error when names repeat or a test's pairing
/// does not resolve to a non-test entry.
std::vector<CatalogEntry> list_catalog(const std::string& asset_dir);
/// Throws Error when no entry has that name.
const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog, std::string_view name);
/// Entry whose file path ends with `path`, if any.
const CatalogEntry* find_entry_by_path(const std::vector<CatalogEntry>& catalog, const std::string& path);

enum class PolicyKind { Random, Bot, Scenic };
std::string_view policy_name(PolicyKind p);
std::optional<PolicyKind> policy_from_name(std::string_view name);

/// Commands for the controlled players of the current tick. Random draws
/// uniformly over the 16 codes from `rng`; Bot runs the rule bot; Scenic runs
/// the ego's behavior on the first controlled player and reduces the command
/// to its action code, so that the same episode is reproducible from codes
/// alone. Scenic falls back to the rule bot for any further controlled
/// players.
std::vector<Command> policy_commands(Environment& env, PolicyKind policy, RngStream& rng);

struct EvalStats {
  int episodes = 0;
  int goals_for = 0;
  int goals_against = 0;
  double avg_goal_difference = 0.0;
  double avg_episode_ticks = 0.0;
  std::map<std::string, int> termination_histogram;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  friend bool operator==(const EvalStats&, const EvalStats&) = default;
};

/// Runs episodes 0..n-1 under `cfg` (its master_seed is overridden by
/// `seed`). Throws Error when n < 1 or when Scenic is requested for a
/// scenario whose ego has no behavior.
EvalStats run_episodes(std::shared_ptr<const CompiledScenario> scenario, PolicyKind policy, int n, std::uint64_t seed,
                       EpisodeConfig cfg = {});

class LowAcceptance : public Error {
 public:
  LowAcceptance(int successes, int episodes)
      : Error("scenic policy scored in " + std::to_string(successes) + " of the first " + std::to_string(episodes) +
              " episodes"),
        successes_(successes) {}
  int successes() const { return successes_; }

 private:
  int successes_;
};

struct DemoSample {
  SmmTensor obs;
  int action = 0;
  std::uint64_t episode = 0;
  int tick = 0;
};

struct DemoManifest {
  std::string scenario;
  std::uint64_t seed = 0;
  int episodes = 0;    // episodes run
  int accepted = 0;    // episodes kept (scored by the RL team)
  int samples = 0;
  double acceptance_rate = 0.0;

  nlohmann::json to_json() const;
};

/// Episodes scanned before the acceptance floor is enforced, and the floor.
inline constexpr int kAcceptanceWindow = 1000;
inline constexpr double kMinAcceptance = 0.01;
inline constexpr std::string_view kObsEncoding = "smm-bitpack-v1";
inline constexpr std::string_view kManifestFile = "manifest.json";
inline constexpr std::string_view kSamplesFile = "samples.jsonl";

/// Runs the scenic policy on episodes 0, 1, ... and keeps whole trajectories
/// of episodes that end in a goal by the RL team until at least `target`
/// pairs are held. Each pair is the observation before the step and the code
/// sent. Throws LowAcceptance when fewer than 1% of the first 1000 episodes
/// are kept while the target is still unmet.
DemoManifest record_demonstrations(std::shared_ptr<const CompiledScenario> scenario, int target, std::uint64_t seed,
                                   std::vector<DemoSample>& out, EpisodeConfig cfg = {});
/// Writes `dir/manifest.json` and `dir/samples.jsonl`, creating `dir`.
void write_dataset(const std::string& dir, const DemoManifest& manifest, const std::vector<DemoSample>& samples);
/// Inverse of write_dataset. Throws Error on malformed files.
std::vector<DemoSample> read_samples(const std::string& dir);
nlohmann::json read_manifest(const std::string& dir);

struct ReplayOutcome {
  std::optional<TerminationCause> cause;
  int ticks = 0;
  Score score;
};

/// Feeds `actions` through reset/step of episode `episode` and reports how
/// it ended (cause empty when the actions ran out first).
ReplayOutcome replay_episode(std::shared_ptr<const CompiledScenario> scenario, std::uint64_t seed,
                             std::uint64_t episode, const std::vector<int>& actions, EpisodeConfig cfg = {});

struct ReportRow {
  std::string scenario;
  std::string policy;
  EvalStats stats;
};

struct GeneralizationReport {
  ReportRow train;
  ReportRow test;
  /// Random policy on the test scenario.
  ReportRow baseline;
  /// test − train average goal difference.
  double delta = 0.0;

  nlohmann::json to_json() const;
};

GeneralizationReport generalization_report(std::shared_ptr<const CompiledScenario> train,
                                           std::shared_ptr<const CompiledScenario> test, PolicyKind policy, int n,
                                           std::uint64_t seed, EpisodeConfig cfg = {});

}  // namespace kickoff::suite
