#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kickoff/env/env.hpp"
#include "kickoff/lang/lexer.hpp"
#include "kickoff/lang/parser.hpp"
#include "kickoff/lang/printer.hpp"
#include "kickoff/lang/validate.hpp"
#include "kickoff/sampler/sampler.hpp"
#include "kickoff/suite/suite.hpp"
#include "support/interrupt_oracle.hpp"
#include "support/program_fuzz.hpp"

using namespace kickoff;
namespace fs = std::filesystem;

namespace {

// Pinned criteria and tolerances.
constexpr int kAssetSeeds = 100;
constexpr int kAssetRejections = 1000;
constexpr double kAssetSeconds = 60.0;
constexpr std::size_t kCoreAssets = 36;
constexpr int kFuzzPrograms = 500;
constexpr int kDeterminismScenarios = 5;
constexpr int kDeterminismSeeds = 20;
constexpr int kDeterminismTicks = 400;
constexpr int kSamplerDraws = 10000;
constexpr double kRangeMeanTol = 0.02;
constexpr double kQuadrantTol = 0.03;
constexpr double kDiscreteSigmas = 3.0;
constexpr int kRandomTimelines = 50;
constexpr int kContractEpisodes = 1000;
constexpr int kSmmTicks = 1000;
constexpr int kDemoPairs = 10000;
constexpr int kDemoReplays = 20;
constexpr int kQualityEpisodes = 500;
constexpr double kScenicMinRate = 0.40;
constexpr double kRandomMaxRate = 0.05;
constexpr double kMinStepsPerSec = 5000.0;
constexpr int kBenchTicks = 20000;
constexpr int kReportEpisodes = 200;

const std::string kAssets = KICKOFF_ASSET_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<suite::CatalogEntry>& catalog() {
  static const auto c = suite::list_catalog(kAssets);
  return c;
}

std::vector<std::string> asset_files() {
  std::vector<std::string> out;
  for (const auto& p : fs::recursive_directory_iterator(fs::path(kAssets) / "scenarios")) {
    if (p.is_regular_file() && p.path().extension() == ".scn") out.push_back(p.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::shared_ptr<const CompiledScenario> entry(std::string_view name) {
  return load_scenario(suite::find_entry(catalog(), name).path);
}

Outcome asset_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t core = 0;
  for (const auto& e : catalog()) core += e.category != suite::Category::Academy;
  const auto files = asset_files();
  int scenes = 0;
  for (const auto& path : files) {
    lang::Program p = lang::parse(lang::tokenize(slurp(path)));
    const auto diags = lang::check_program(p, FieldSpec::standard());
    if (!diags.empty()) return {false, path + ": " + diags.front().message};
    for (int s = 0; s < kAssetSeeds; ++s) {
      RngStream rng = episode_stream(static_cast<std::uint64_t>(s), 0, EpisodeStream::Scene);
      sample_scene(p, FieldSpec::standard(), rng, kAssetRejections);
      ++scenes;
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = core >= kCoreAssets && secs < kAssetSeconds;
  return {ok, fmt("%zu programs (%zu catalogued outside academy, need %zu), %d scenes, %.2f s (limit %.0f s)",
                  files.size(), core, kCoreAssets, scenes, secs, kAssetSeconds)};
}

Outcome parser_round_trip() {
  int n = 0;
  const auto check = [&](const std::string& src, const std::string& label) -> std::optional<std::string> {
    const lang::Program a = lang::parse_source(src);
    const lang::Program b = lang::parse_source(lang::pretty_print(a));
    ++n;
    if (!(a == b)) return label;
    return std::nullopt;
  };
  for (const auto& path : asset_files()) {
    if (auto bad = check(slurp(path), path)) return {false, "mismatch on " + *bad};
  }
  for (int i = 0; i < kFuzzPrograms; ++i) {
    if (auto bad = check(testing::ProgramFuzzer(static_cast<std::uint64_t>(i)).program(), "fuzz " + std::to_string(i))) {
      return {false, "mismatch on " + *bad};
    }
  }
  return {true, fmt("%d programs (assets + %d fuzz) round-trip structurally", n, kFuzzPrograms)};
}

std::uint64_t random_trace(const std::string& path, std::uint64_t seed) {
  EpisodeConfig cfg;
  cfg.master_seed = seed;
  Environment env(load_scenario(path), cfg);
  RngStream rng = episode_stream(seed, 0, EpisodeStream::Policy);
  TraceHash h;
  std::uint64_t ep = 0;
  h.add_reset(env.reset(ep));
  for (int t = 0; t < kDeterminismTicks; ++t) {
    if (env.done()) h.add_reset(env.reset(++ep));
    const int a = static_cast<int>(rng.index(kActionCount));
    h.add_step(env.step(std::span<const int>(&a, 1)));
  }
  return h.value();
}

Outcome determinism() {
  const char* names[kDeterminismScenarios] = {"Easy Crossing", "2 vs 2", "3 vs 3 Cross from side",
                                               "Goalkeeper vs Opponent", "Run to Score with GK"};
  int runs = 0;
  std::set<std::uint64_t> distinct;
  for (const char* name : names) {
    const std::string path = suite::find_entry(catalog(), name).path;
    for (int s = 0; s < kDeterminismSeeds; ++s) {
      const auto a = random_trace(path, static_cast<std::uint64_t>(s));
      const auto b = random_trace(path, static_cast<std::uint64_t>(s));
      if (a != b) return {false, fmt("%s seed %d: %016llx != %016llx", name, s, (unsigned long long)a, (unsigned long long)b)};
      distinct.insert(a);
      ++runs;
    }
  }
  return {true, fmt("%d scenario-seed pairs x %d ticks identical across independent runs (%zu distinct hashes)", runs,
                    kDeterminismTicks, distinct.size())};
}

Outcome sampler_statistics() {
  RngStream rng(2024);
  const lang::Expr range = lang::parse_expression("Range(0, 1)");
  double sum = 0.0;
  for (int i = 0; i < kSamplerDraws; ++i) sum += lang::as_number(sample_distribution(range, rng));
  const double mean = sum / kSamplerDraws;

  const auto prog = lang::load_program("ego = LeftCM in rect(-0.5, -0.2, 0.5, 0.2)\n", FieldSpec::standard());
  int quad[4] = {0, 0, 0, 0};
  for (int i = 0; i < kSamplerDraws; ++i) {
    const Scene s = sample_scene(prog, FieldSpec::standard(), rng);
    const Vec2 p = s.players.front().pos;
    ++quad[(p.x >= 0 ? 1 : 0) + (p.y >= 0 ? 2 : 0)];
  }
  double worst_quad = 0.0;
  for (int q : quad) worst_quad = std::max(worst_quad, std::abs(static_cast<double>(q) / kSamplerDraws - 0.25));

  const lang::Expr disc = lang::parse_expression("Discrete({1: 1, 2: 3, 3: 6})");
  const double w[3] = {0.1, 0.3, 0.6};
  int hits[3] = {0, 0, 0};
  for (int i = 0; i < kSamplerDraws; ++i) ++hits[static_cast<int>(lang::as_number(sample_distribution(disc, rng))) - 1];
  double worst_sigma = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double sd = std::sqrt(kSamplerDraws * w[k] * (1 - w[k]));
    worst_sigma = std::max(worst_sigma, std::abs(hits[k] - kSamplerDraws * w[k]) / sd);
  }
  const bool ok = std::abs(mean - 0.5) <= kRangeMeanTol && worst_quad <= kQuadrantTol && worst_sigma <= kDiscreteSigmas;
  return {ok, fmt("Range mean %.4f (tol %.2f), worst quadrant deviation %.4f (tol %.2f), worst Discrete z %.2f (tol %.1f)",
                  mean, kRangeMeanTol, worst_quad, kQuadrantTol, worst_sigma, kDiscreteSigmas)};
}

Outcome interrupt_semantics() {
  int cases = 0;
  for (int k = 1; k <= 3; ++k) {
    const testing::TryShape shape{3, std::vector<int>(static_cast<std::size_t>(k), 2)};
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      for (int start = 0; start <= 4; ++start) {
        testing::Timeline tl(16, std::vector<bool>(static_cast<std::size_t>(k), false));
        for (int t = start; t < static_cast<int>(tl.size()); ++t) {
          for (int j = 0; j < k; ++j) tl[t][j] = (mask >> j) & 1u;
        }
        if (testing::engine_trace(shape, tl) != testing::reference_trace(shape, tl)) {
          return {false, fmt("k=%d mask=%u start=%d diverges from the reference", k, mask, start)};
        }
        ++cases;
      }
    }
  }
  RngStream rng(909);
  for (int trial = 0; trial < kRandomTimelines; ++trial) {
    const int k = 1 + static_cast<int>(rng.index(3));
    testing::TryShape shape;
    shape.body = 2 + static_cast<int>(rng.index(5));
    shape.clauses.clear();
    for (int j = 0; j < k; ++j) shape.clauses.push_back(1 + static_cast<int>(rng.index(4)));
    testing::Timeline tl;
    std::vector<bool> cur(static_cast<std::size_t>(k), false);
    for (int t = 0; t < 40; ++t) {
      for (int j = 0; j < k; ++j) {
        if (rng.bernoulli(0.3)) cur[j] = !cur[j];
      }
      tl.push_back(cur);
    }
    const auto got = testing::engine_trace(shape, tl);
    if (got != testing::reference_trace(shape, tl)) return {false, fmt("random timeline %d diverges", trial)};
    const auto body = testing::body_statements(got);
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] != static_cast<int>(i)) return {false, fmt("random timeline %d breaks body order", trial)};
    }
    ++cases;
  }
  return {true, fmt("%d timelines match the reference (all condition vectors for k<=3 plus %d random)", cases,
                    kRandomTimelines)};
}

Outcome episode_contract() {
  long long episodes = 0;
  double worst_avg = 0.0;
  for (const auto& e : catalog()) {
    const auto sc = load_scenario(e.path);
    Environment env(sc, EpisodeConfig{});
    int diff_sum = 0;
    for (int ep = 0; ep < kContractEpisodes; ++ep) {
      env.reset(static_cast<std::uint64_t>(ep));
      RngStream rng = episode_stream(0, static_cast<std::uint64_t>(ep), EpisodeStream::Policy);
      double total = 0.0;
      int causes = 0;
      StepResult r;
      while (!env.done()) {
        const int a = static_cast<int>(rng.index(kActionCount));
        r = env.step(std::span<const int>(&a, 1));
        total += r.reward;
        causes += r.info.cause.has_value();
      }
      const int diff = r.info.score.left - r.info.score.right;
      const int sign = (diff > 0) - (diff < 0);
      if (causes != 1) return {false, fmt("%s episode %d ended with %d causes", e.name.c_str(), ep, causes)};
      if (total != -1.0 && total != 0.0 && total != 1.0) {
        return {false, fmt("%s episode %d cumulative reward %g", e.name.c_str(), ep, total)};
      }
      if (total != sign) return {false, fmt("%s episode %d reward %g vs goal difference %d", e.name.c_str(), ep, total, diff)};
      diff_sum += diff;
      ++episodes;
    }
    const double avg = static_cast<double>(diff_sum) / kContractEpisodes;
    if (avg < -1.0 || avg > 1.0) return {false, fmt("%s average goal difference %g", e.name.c_str(), avg)};
    worst_avg = std::max(worst_avg, std::abs(avg));
  }
  return {true, fmt("%lld random episodes over %zu scenarios: one cause each, reward = sign(goal difference), max |avg| %.3f",
                    episodes, catalog().size(), worst_avg)};
}

Outcome smm_invariants() {
  if (smm_cell({-1.0, -0.42}) != SmmCell{0, 0} || smm_cell({1.0, 0.42}) != SmmCell{71, 95} ||
      smm_cell({0.0, 0.0}) != SmmCell{36, 48}) {
    return {false, "corner or midpoint pixel mapping is off"};
  }
  int ticks = 0;
  for (int agents = 1; agents <= 3; ++agents) {
    EpisodeConfig cfg;
    cfg.n_rl_agents = agents;
    Environment env(entry("3 vs 3 side build up play"), cfg);
    RngStream rng(static_cast<std::uint64_t>(agents));
    std::uint64_t ep = 0;
    const SmmTensor* obs = &env.reset(ep);
    for (int t = 0; t < kSmmTicks; ++t) {
      if (env.done()) obs = &env.reset(++ep);
      const WorldState& w = env.world();
      if (obs->popcount(2) != 1) return {false, fmt("ball channel popcount %d at tick %d", obs->popcount(2), t)};
      if (obs->popcount(3) != agents) return {false, fmt("active channel popcount %d, want %d", obs->popcount(3), agents)};
      const SmmCell b = smm_cell(w.ball.pos);
      if (!obs->get(2, b.row, b.col)) return {false, "ball pixel not set"};
      for (const auto& p : w.players) {
        const SmmCell c = smm_cell(p.pos);
        if (!obs->get(p.team == Team::Left ? 0 : 1, c.row, c.col)) return {false, "player pixel not set"};
      }
      std::vector<int> acts;
      for (int k = 0; k < agents; ++k) acts.push_back(static_cast<int>(rng.index(kActionCount)));
      env.step(acts);
      obs = &env.observation();
      ++ticks;
    }
  }
  return {true, fmt("%d fuzz ticks (1-3 agents): shape %dx%dx%d, ball popcount 1, active popcount = agents, pixels match",
                    ticks, SmmTensor::kChannels, SmmTensor::kRows, SmmTensor::kCols)};
}

Outcome demonstrations() {
  const auto sc = entry("Run to Score with GK");
  std::vector<suite::DemoSample> pairs;
  const auto m = suite::record_demonstrations(sc, kDemoPairs, 0, pairs);
  std::map<std::uint64_t, std::vector<int>> by_ep;
  for (const auto& s : pairs) by_ep[s.episode].push_back(s.action);
  std::vector<std::uint64_t> eps;
  for (const auto& [ep, _] : by_ep) eps.push_back(ep);
  int goals = 0;
  for (const auto& [ep, actions] : by_ep) {
    const auto o = suite::replay_episode(sc, 0, ep, actions);
    goals += o.cause && o.cause->kind == TerminationCause::Kind::Goal && o.cause->team == Team::Left;
  }
  RngStream rng(77);
  int chosen_ok = 0;
  for (int i = 0; i < kDemoReplays; ++i) {
    const auto ep = eps[rng.index(eps.size())];
    const auto o = suite::replay_episode(sc, 0, ep, by_ep[ep]);
    chosen_ok += o.cause && o.cause->kind == TerminationCause::Kind::Goal && o.cause->team == Team::Left;
  }
  const auto scenic = suite::run_episodes(sc, suite::PolicyKind::Scenic, kQualityEpisodes, 0);
  const auto random = suite::run_episodes(sc, suite::PolicyKind::Random, kQualityEpisodes, 0);
  const double sr = static_cast<double>(scenic.goals_for) / kQualityEpisodes;
  const double rr = static_cast<double>(random.goals_for) / kQualityEpisodes;
  const bool ok = m.samples >= kDemoPairs && goals == static_cast<int>(by_ep.size()) && chosen_ok == kDemoReplays &&
                  sr >= kScenicMinRate && rr < kRandomMaxRate;
  return {ok, fmt("%d pairs from %d episodes (%d replay to a Left goal), %d/%d sampled replays score; scenic %.1f%% "
                  "(need >= %.0f%%), random %.1f%% (need < %.0f%%) over %d episodes",
                  m.samples, m.accepted, goals, chosen_ok, kDemoReplays, 100 * sr, 100 * kScenicMinRate, 100 * rr,
                  100 * kRandomMaxRate, kQualityEpisodes)};
}

Outcome throughput() {
  const auto sc = load_scenario((fs::path(kAssets) / "scenarios" / "bench" / "full_match_11v11.scn").string());
  Environment env(sc, EpisodeConfig{});
  RngStream rng = episode_stream(0, 0, EpisodeStream::Policy);
  std::uint64_t ep = 0;
  env.reset(ep);
  const std::size_t players = env.world().players.size();
  const auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < kBenchTicks; ++t) {
    if (env.done()) env.reset(++ep);
    const int a = static_cast<int>(rng.index(kActionCount));
    env.step(std::span<const int>(&a, 1));
  }
  const double rate = kBenchTicks / seconds_since(t0);
  return {players == 22 && rate >= kMinStepsPerSec,
          fmt("%.0f steps/s on %zu players (need >= %.0f)", rate, players, kMinStepsPerSec)};
}

Outcome generalization() {
  const auto r = suite::generalization_report(entry("Easy Crossing"), entry("Easy Crossing Test"), suite::PolicyKind::Bot,
                                              kReportEpisodes, 0);
  const auto j = r.to_json();
  const bool shaped = j.contains("train") && j.contains("test") && j.contains("baseline") &&
                      r.train.stats.episodes == kReportEpisodes && r.baseline.policy == "random";
  const double base = r.baseline.stats.avg_goal_difference;
  const double bot = r.test.stats.avg_goal_difference;
  return {shaped && base <= bot, fmt("test: random %.3f <= bot %.3f (train bot %.3f, delta %.3f) over %d episodes", base,
                                     bot, r.train.stats.avg_goal_difference, r.delta, kReportEpisodes)};
}

}  // namespace

int main() {
  report("asset_suite", asset_suite);
  report("parser_round_trip", parser_round_trip);
  report("determinism", determinism);
  report("sampler_statistics", sampler_statistics);
  report("interrupt_semantics", interrupt_semantics);
  report("episode_contract", episode_contract);
  report("smm_invariants", smm_invariants);
  report("demonstrations", demonstrations);
  report("throughput", throughput);
  report("generalization_report", generalization);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
