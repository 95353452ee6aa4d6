#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>

#include "kickoff/env/env.hpp"
#include "kickoff/env/protocol.hpp"
#include "kickoff/lang/lexer.hpp"
#include "kickoff/lang/parser.hpp"
#include "kickoff/sampler/sampler.hpp"
#include "kickoff/suite/suite.hpp"

using namespace kickoff;
using nlohmann::json;

namespace {

struct Common {
  std::string reward_mode = "scoring";
  std::string sim_params;
  int max_rejections = kDefaultMaxRejections;

  EpisodeConfig config(std::uint64_t seed) const {
    EpisodeConfig cfg;
    cfg.master_seed = seed;
    const auto m = reward_mode_from_name(reward_mode);
    if (!m) throw Error("unknown reward mode '" + reward_mode + "'");
    cfg.reward_mode = *m;
    if (!sim_params.empty()) cfg.sim = load_sim_params(sim_params);
    cfg.sim.check();
    cfg.max_rejections = max_rejections;
    return cfg;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--reward-mode", c.reward_mode, "scoring or scoring+monitors");
  app->add_option("--sim-params", c.sim_params, "file of key = value simulator overrides");
  app->add_option("--max-rejections", c.max_rejections, "rejection budget per scene");
}

suite::PolicyKind parse_policy(const std::string& name) {
  const auto p = suite::policy_from_name(name);
  if (!p) throw Error("unknown policy '" + name + "' (random, bot or scenic)");
  return *p;
}

int cmd_sample(const std::string& file, std::uint64_t seed, int n, const Common& c) {
  const auto sc = load_scenario(file);
  for (int i = 0; i < n; ++i) {
    RngStream rng = episode_stream(seed, static_cast<std::uint64_t>(i), EpisodeStream::Scene);
    std::cout << scene_to_json(sample_scene(sc->program, sc->field, rng, c.max_rejections)) << "\n";
  }
  return 0;
}

int cmd_bench(const std::string& file, int ticks, std::uint64_t seed, const Common& c) {
  Environment env(load_scenario(file), c.config(seed));
  RngStream rng = episode_stream(seed, 0, EpisodeStream::Policy);
  std::uint64_t ep = 0;
  int episodes = 1;
  const auto t0 = std::chrono::steady_clock::now();
  env.reset(ep);
  for (int t = 0; t < ticks; ++t) {
    if (env.done()) {
      env.reset(++ep);
      ++episodes;
    }
    const int a = static_cast<int>(rng.index(kActionCount));
    env.step(std::span<const int>(&a, 1));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << json{{"scenario", env.scenario().name},
                    {"players", env.world().players.size()},
                    {"steps", ticks},
                    {"episodes", episodes},
                    {"seconds", secs},
                    {"steps_per_sec", secs > 0 ? ticks / secs : 0.0}}
                   .dump()
            << "\n";
  return 0;
}

int cmd_serve(const std::string& listen, bool stdio, const Common& c) {
  const EpisodeConfig cfg = c.config(0);
  if (stdio) {
    serve_stream(std::cin, std::cout, cfg);
    return 0;
  }
  if (listen.empty()) throw Error("serve needs --listen <addr> or --stdio");
  TcpServer server(listen, cfg);
  std::cerr << "listening on port " << server.port() << "\n";
  server.run();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario-driven football environment toolkit"};
  app.require_subcommand(1);
  Common common;

  std::string file;
  std::uint64_t seed = 0;
  int count = 1;

  auto* sample = app.add_subcommand("sample", "Sample scenes and print them as JSON lines");
  sample->add_option("file", file, "scenario file")->required();
  sample->add_option("--seed", seed, "master seed")->required();
  sample->add_option("-n", count, "number of scenes");
  add_common(sample, common);

  std::string policy = "random";
  int episodes = 100;
  auto* run = app.add_subcommand("run", "Evaluate a policy and print EvalStats JSON");
  run->add_option("file", file, "scenario file")->required();
  run->add_option("--policy", policy, "random, bot or scenic");
  run->add_option("--episodes", episodes, "episode count");
  run->add_option("--seed", seed, "master seed");
  add_common(run, common);

  std::string listen;
  bool stdio = false;
  auto* serve = app.add_subcommand("serve", "Serve the line protocol over TCP or stdio");
  serve->add_option("--listen", listen, "port, :port or host:port");
  serve->add_flag("--stdio", stdio, "serve one session on stdin/stdout");
  add_common(serve, common);

  int samples = 10000;
  std::string out;
  auto* record = app.add_subcommand("record", "Record successful scenic-policy demonstrations");
  record->add_option("file", file, "scenario file")->required();
  record->add_option("--samples", samples, "minimum number of pairs");
  record->add_option("--out", out, "output directory")->required();
  record->add_option("--seed", seed, "master seed");
  add_common(record, common);

  int ticks = 20000;
  auto* bench = app.add_subcommand("bench", "Measure random-policy env steps per second");
  bench->add_option("file", file, "scenario file")->required();
  bench->add_option("--ticks", ticks, "steps to run");
  bench->add_option("--seed", seed, "master seed");
  add_common(bench, common);

  std::string train;
  std::string test;
  auto* report = app.add_subcommand("report", "Compare a policy on a train/test pair with a random baseline");
  report->add_option("--train", train, "training scenario file")->required();
  report->add_option("--test", test, "test scenario file")->required();
  report->add_option("--episodes", episodes, "episodes per row");
  std::string report_policy = "bot";
  report->add_option("--policy", report_policy, "random, bot or scenic");
  report->add_option("--seed", seed, "master seed");
  add_common(report, common);

  std::string assets = KICKOFF_DEFAULT_ASSET_DIR;
  auto* catalog = app.add_subcommand("catalog", "List the shipped scenario catalog");
  catalog->add_option("--assets", assets, "asset directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) return cmd_sample(file, seed, count, common);
    if (*run) {
      std::cout << suite::run_episodes(load_scenario(file), parse_policy(policy), episodes, seed, common.config(seed))
                       .to_json()
                       .dump()
                << "\n";
      return 0;
    }
    if (*serve) return cmd_serve(listen, stdio, common);
    if (*record) {
      std::vector<suite::DemoSample> pairs;
      const auto m = suite::record_demonstrations(load_scenario(file), samples, seed, pairs, common.config(seed));
      suite::write_dataset(out, m, pairs);
      std::cout << m.to_json().dump() << "\n";
      return 0;
    }
    if (*bench) return cmd_bench(file, ticks, seed, common);
    if (*report) {
      const auto r = suite::generalization_report(load_scenario(train), load_scenario(test), parse_policy(report_policy),
                                                  episodes, seed, common.config(seed));
      std::cout << r.to_json().dump() << "\n";
      return 0;
    }
    if (*catalog) {
      json list = json::array();
      for (const auto& e : suite::list_catalog(assets)) {
        json j{{"name", e.name}, {"category", suite::category_name(e.category)}, {"file", e.path},
               {"description", e.description}};
        if (e.paired_train) j["paired_train"] = *e.paired_train;
        list.push_back(std::move(j));
      }
      std::cout << list.dump(2) << "\n";
      return 0;
    }
  } catch (const lang::LexError& e) {
    std::cerr << "lex error: " << e.what() << "\n";
    return 2;
  } catch (const lang::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
