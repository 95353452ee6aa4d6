#include "kickoff/suite/suite.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "kickoff/behavior/builtins.hpp"

namespace kickoff::suite {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<std::pair<Category, std::string_view>, 5> kCategoryNames = {{
    {Category::Offense, "offense"},
    {Category::Defense, "defense"},
    {Category::GeneralizationTest, "generalization_test"},
    {Category::SemiExpertPolicy, "semi_expert_policy"},
    {Category::Academy, "academy"},
}};

constexpr std::array<std::pair<PolicyKind, std::string_view>, 3> kPolicyNames = {{
    {PolicyKind::Random, "random"},
    {PolicyKind::Bot, "bot"},
    {PolicyKind::Scenic, "scenic"},
}};

bool goal_for(const std::optional<TerminationCause>& c, Team team) {
  return c && c->kind == TerminationCause::Kind::Goal && c->team == team;
}

}  // namespace

std::string_view category_name(Category c) {
  for (const auto& [k, n] : kCategoryNames) {
    if (k == c) return n;
  }
  return "unknown";
}

std::optional<Category> category_from_name(std::string_view name) {
  for (const auto& [k, n] : kCategoryNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::string_view policy_name(PolicyKind p) {
  for (const auto& [k, n] : kPolicyNames) {
    if (k == p) return n;
  }
  return "unknown";
}

std::optional<PolicyKind> policy_from_name(std::string_view name) {
  for (const auto& [k, n] : kPolicyNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::vector<CatalogEntry> list_catalog(const std::string& asset_dir) {
  const fs::path index = fs::path(asset_dir) / kCatalogFile;
  std::ifstream in(index);
  if (!in) throw AssetMissing(index.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(index.string() + ": " + e.what());
  }
  const fs::path root = index.parent_path();
  std::vector<CatalogEntry> out;
  std::set<std::string, std::less<>> names;
  for (const auto& j : doc.at("entries")) {
    CatalogEntry e;
    e.name = j.at("name").get<std::string>();
    const auto cat = category_from_name(j.at("category").get<std::string>());
    if (!cat) throw Error("catalog entry '" + e.name + "' has an unknown category");
    e.category = *cat;
    e.path = (root / j.at("file").get<std::string>()).lexically_normal().string();
    e.description = j.value("description", "");
    if (j.contains("paired_train")) e.paired_train = j.at("paired_train").get<std::string>();
    if (!names.insert(e.name).second) throw Error("catalog entry name repeats: " + e.name);
    if (!fs::is_regular_file(e.path)) throw AssetMissing(e.path);
    out.push_back(std::move(e));
  }
  for (const auto& e : out) {
    const bool is_test = e.category == Category::GeneralizationTest;
    if (is_test != e.paired_train.has_value()) {
      throw Error("catalog entry '" + e.name + "': only generalization tests carry a paired training entry");
    }
    if (!is_test) continue;
    const auto it = std::find_if(out.begin(), out.end(), [&](const CatalogEntry& t) { return t.name == *e.paired_train; });
    if (it == out.end() || it->category == Category::GeneralizationTest) {
      throw Error("catalog entry '" + e.name + "' pairs with unknown training entry '" + *e.paired_train + "'");
    }
  }
  return out;
}

const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog, std::string_view name) {
  for (const auto& e : catalog) {
    if (e.name == name) return e;
  }
  throw Error("no catalog entry named '" + std::string(name) + "'");
}

const CatalogEntry* find_entry_by_path(const std::vector<CatalogEntry>& catalog, const std::string& path) {
  std::error_code ec;
  const fs::path want = fs::weakly_canonical(path, ec);
  for (const auto& e : catalog) {
    if (fs::weakly_canonical(e.path, ec) == want) return &e;
  }
  return nullptr;
}

std::vector<Command> policy_commands(Environment& env, PolicyKind policy, RngStream& rng) {
  const auto& ctl = env.controlled();
  std::vector<Command> cmds;
  cmds.reserve(ctl.size());
  for (std::size_t k = 0; k < ctl.size(); ++k) {
    switch (policy) {
      case PolicyKind::Random:
        cmds.emplace_back(static_cast<Action>(rng.index(kActionCount)));
        break;
      case PolicyKind::Bot:
        cmds.push_back(behavior::rule_bot(env.world(), ctl[k], env.sim(), env.scenario().field));
        break;
      case PolicyKind::Scenic:
        if (k == 0) {
          cmds.emplace_back(env.policy_command(ctl[k]).action);
        } else {
          cmds.push_back(behavior::rule_bot(env.world(), ctl[k], env.sim(), env.scenario().field));
        }
        break;
    }
  }
  return cmds;
}

json EvalStats::to_json() const {
  return json{{"episodes", episodes},
              {"goals_for", goals_for},
              {"goals_against", goals_against},
              {"avg_goal_difference", avg_goal_difference},
              {"avg_episode_ticks", avg_episode_ticks},
              {"termination_histogram", termination_histogram},
              {"seed", seed}};
}

EvalStats run_episodes(std::shared_ptr<const CompiledScenario> scenario, PolicyKind policy, int n, std::uint64_t seed,
                       EpisodeConfig cfg) {
  if (n < 1) throw Error("run_episodes needs at least one episode");
  cfg.master_seed = seed;
  Environment env(std::move(scenario), cfg);
  EvalStats s;
  s.episodes = n;
  s.seed = seed;
  long long ticks = 0;
  for (int ep = 0; ep < n; ++ep) {
    env.reset(static_cast<std::uint64_t>(ep));
    if (policy == PolicyKind::Scenic && !env.has_policy_behavior()) {
      throw Error("scenario '" + env.scenario().name + "' gives the ego no behavior to run as a policy");
    }
    RngStream rng = episode_stream(seed, static_cast<std::uint64_t>(ep), EpisodeStream::Policy);
    StepResult r;
    while (!env.done()) {
      const auto cmds = policy_commands(env, policy, rng);
      r = env.step_commands(cmds);
    }
    const Team rl = cfg.rl_team;
    if (goal_for(r.info.cause, rl)) ++s.goals_for;
    if (goal_for(r.info.cause, other(rl))) ++s.goals_against;
    ticks += r.info.tick;
    ++s.termination_histogram[cause_key(*r.info.cause)];
  }
  s.avg_goal_difference = static_cast<double>(s.goals_for - s.goals_against) / n;
  s.avg_episode_ticks = static_cast<double>(ticks) / n;
  return s;
}

json DemoManifest::to_json() const {
  return json{{"scenario", scenario},
              {"seed", seed},
              {"episodes", episodes},
              {"accepted_episodes", accepted},
              {"samples", samples},
              {"acceptance_rate", acceptance_rate},
              {"obs_encoding", kObsEncoding}};
}

DemoManifest record_demonstrations(std::shared_ptr<const CompiledScenario> scenario, int target, std::uint64_t seed,
                                   std::vector<DemoSample>& out, EpisodeConfig cfg) {
  if (target < 1) throw Error("record_demonstrations needs a positive target");
  cfg.master_seed = seed;
  DemoManifest m;
  m.scenario = scenario->name;
  m.seed = seed;
  Environment env(std::move(scenario), cfg);
  out.clear();
  std::vector<DemoSample> episode;
  RngStream no_draws(0);
  while (static_cast<int>(out.size()) < target) {
    const auto ep = static_cast<std::uint64_t>(m.episodes);
    env.reset(ep);
    if (!env.has_policy_behavior()) {
      throw Error("scenario '" + env.scenario().name + "' gives the ego no behavior to run as a policy");
    }
    episode.clear();
    StepResult r;
    while (!env.done()) {
      const SmmTensor obs = env.observation();
      const int tick = env.world().tick;
      const auto cmds = policy_commands(env, PolicyKind::Scenic, no_draws);
      r = env.step_commands(cmds);
      episode.push_back(DemoSample{obs, action_code(cmds.front().action), ep, tick});
    }
    ++m.episodes;
    if (goal_for(r.info.cause, cfg.rl_team)) {
      ++m.accepted;
      out.insert(out.end(), episode.begin(), episode.end());
    }
    if (m.episodes == kAcceptanceWindow && static_cast<int>(out.size()) < target &&
        m.accepted < kMinAcceptance * kAcceptanceWindow) {
      throw LowAcceptance(m.accepted, m.episodes);
    }
  }
  m.samples = static_cast<int>(out.size());
  m.acceptance_rate = static_cast<double>(m.accepted) / m.episodes;
  return m;
}

void write_dataset(const std::string& dir, const DemoManifest& manifest, const std::vector<DemoSample>& samples) {
  fs::create_directories(dir);
  {
    std::ofstream f(fs::path(dir) / kManifestFile);
    if (!f) throw Error("cannot write " + (fs::path(dir) / kManifestFile).string());
    f << manifest.to_json().dump(2) << "\n";
  }
  std::ofstream f(fs::path(dir) / kSamplesFile);
  if (!f) throw Error("cannot write " + (fs::path(dir) / kSamplesFile).string());
  for (const auto& s : samples) {
    const auto& b = s.obs.bytes();
    f << json{{"o", base64_encode(std::span<const std::uint8_t>(b.data(), b.size()))},
              {"a", s.action},
              {"ep", s.episode},
              {"t", s.tick}}
             .dump()
      << "\n";
  }
}

std::vector<DemoSample> read_samples(const std::string& dir) {
  const fs::path p = fs::path(dir) / kSamplesFile;
  std::ifstream f(p);
  if (!f) throw AssetMissing(p.string());
  std::vector<DemoSample> out;
  std::string line;
  int n = 0;
  while (std::getline(f, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      DemoSample s;
      s.obs = SmmTensor::from_bytes(base64_decode(j.at("o").get<std::string>()));
      s.action = j.at("a").get<int>();
      s.episode = j.at("ep").get<std::uint64_t>();
      s.tick = j.at("t").get<int>();
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw Error(p.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

json read_manifest(const std::string& dir) {
  const fs::path p = fs::path(dir) / kManifestFile;
  std::ifstream f(p);
  if (!f) throw AssetMissing(p.string());
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

ReplayOutcome replay_episode(std::shared_ptr<const CompiledScenario> scenario, std::uint64_t seed,
                             std::uint64_t episode, const std::vector<int>& actions, EpisodeConfig cfg) {
  cfg.master_seed = seed;
  Environment env(std::move(scenario), cfg);
  env.reset(episode);
  ReplayOutcome out;
  for (int a : actions) {
    if (env.done()) break;
    const StepResult r = env.step(std::span<const int>(&a, 1));
    out.cause = r.info.cause;
    out.ticks = r.info.tick;
    out.score = r.info.score;
  }
  return out;
}

json GeneralizationReport::to_json() const {
  const auto row = [](const ReportRow& r) {
    return json{{"scenario", r.scenario}, {"policy", r.policy}, {"stats", r.stats.to_json()}};
  };
  return json{{"train", row(train)},
              {"test", row(test)},
              {"baseline", row(baseline)},
              {"delta_avg_goal_difference", delta},
              {"abs_delta_avg_goal_difference", std::abs(delta)},
              {"baseline_minus_test", baseline.stats.avg_goal_difference - test.stats.avg_goal_difference}};
}

GeneralizationReport generalization_report(std::shared_ptr<const CompiledScenario> train,
                                           std::shared_ptr<const CompiledScenario> test, PolicyKind policy, int n,
                                           std::uint64_t seed, EpisodeConfig cfg) {
  GeneralizationReport r;
  const std::string pname(policy_name(policy));
  r.train = {train->name, pname, run_episodes(train, policy, n, seed, cfg)};
  r.test = {test->name, pname, run_episodes(test, policy, n, seed, cfg)};
  r.baseline = {test->name, std::string(policy_name(PolicyKind::Random)),
                run_episodes(test, PolicyKind::Random, n, seed, cfg)};
  r.delta = r.test.stats.avg_goal_difference - r.train.stats.avg_goal_difference;
  return r;
}

}  // namespace kickoff::suite
