#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kickoff/env/env.hpp"
#include "kickoff/lang/lexer.hpp"
#include "kickoff/lang/parser.hpp"
#include "kickoff/lang/validate.hpp"
#include "kickoff/sampler/sampler.hpp"
#include "kickoff/suite/suite.hpp"

namespace py = pybind11;
using namespace kickoff;

namespace {

/// Python-side handle; compiled scenarios are immutable and shared.
struct Scenario {
  std::shared_ptr<const CompiledScenario> ptr;
  const CompiledScenario* operator->() const { return ptr.get(); }
};
using ObsArray = py::array_t<std::uint8_t>;

ObsArray unpack(const SmmTensor& t) {
  ObsArray a({SmmTensor::kChannels, SmmTensor::kRows, SmmTensor::kCols});
  auto v = a.mutable_unchecked<3>();
  for (int c = 0; c < SmmTensor::kChannels; ++c) {
    for (int r = 0; r < SmmTensor::kRows; ++r) {
      for (int k = 0; k < SmmTensor::kCols; ++k) v(c, r, k) = t.get(c, r, k) ? 1 : 0;
    }
  }
  return a;
}

SmmTensor pack(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 3 || a.shape(0) != SmmTensor::kChannels || a.shape(1) != SmmTensor::kRows ||
      a.shape(2) != SmmTensor::kCols) {
    throw Error("observation array must have shape (4, 72, 96)");
  }
  const auto v = a.unchecked<3>();
  SmmTensor t;
  for (int c = 0; c < SmmTensor::kChannels; ++c) {
    for (int r = 0; r < SmmTensor::kRows; ++r) {
      for (int k = 0; k < SmmTensor::kCols; ++k) {
        if (v(c, r, k)) t.set(c, r, k);
      }
    }
  }
  return t;
}

py::bytes packed_bytes(const SmmTensor& t) {
  return py::bytes(reinterpret_cast<const char*>(t.bytes().data()), t.bytes().size());
}

SmmTensor from_packed(const py::bytes& b) {
  const std::string s = b;
  return SmmTensor::from_bytes(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

EpisodeConfig make_config(std::uint64_t seed, const std::string& reward_mode, int n_rl_agents) {
  EpisodeConfig cfg;
  cfg.master_seed = seed;
  const auto m = reward_mode_from_name(reward_mode);
  if (!m) throw Error("unknown reward mode '" + reward_mode + "'");
  cfg.reward_mode = *m;
  cfg.n_rl_agents = n_rl_agents;
  return cfg;
}

suite::PolicyKind policy_of(const std::string& name) {
  const auto p = suite::policy_from_name(name);
  if (!p) throw Error("unknown policy '" + name + "' (random, bot or scenic)");
  return *p;
}

py::dict info_dict(const StepInfo& info) {
  py::dict d;
  d["score"] = py::make_tuple(info.score.left, info.score.right);
  d["tick"] = info.tick;
  d["cause"] = info.cause ? py::object(py::str(cause_key(*info.cause))) : py::object(py::none());
  d["monitor_reward"] = info.monitor_reward;
  d["controlled"] = info.controlled;
  return d;
}

}  // namespace

PYBIND11_MODULE(_kickoff, m) {
  m.doc() = "Scenario-driven football environment";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<lang::LexError>(m, "LexError", base);
  py::register_exception<lang::ParseError>(m, "ParseError", base);
  py::register_exception<lang::ValidationError>(m, "ValidationError", base);
  py::register_exception<Unsatisfiable>(m, "Unsatisfiable", base);
  py::register_exception<EpisodeDone>(m, "EpisodeDone", base);
  py::register_exception<NoEpisode>(m, "NoEpisode", base);
  py::register_exception<BadActionCode>(m, "BadActionCode", base);

  m.attr("ACTION_COUNT") = kActionCount;
  py::list names;
  for (int a = 0; a < kActionCount; ++a) names.append(action_name(static_cast<Action>(a)));
  m.attr("ACTION_NAMES") = names;
  m.attr("OBS_SHAPE") = py::make_tuple(SmmTensor::kChannels, SmmTensor::kRows, SmmTensor::kCols);

  py::class_<Scenario>(m, "Scenario").def_property_readonly("name", [](const Scenario& s) { return s->name; });

  m.def(
      "load_scenario", [](const std::string& source) { return Scenario{load_scenario(source)}; },
      py::arg("path_or_text"));
  m.def(
      "compile_scenario",
      [](const std::string& text, const std::string& name) { return Scenario{compile_scenario(text, name)}; },
      py::arg("text"), py::arg("name") = "");

  m.def(
      "sample_json",
      [](const Scenario& s, std::uint64_t seed, int n) {
        std::vector<std::string> out;
        for (int i = 0; i < n; ++i) {
          RngStream rng = episode_stream(seed, static_cast<std::uint64_t>(i), EpisodeStream::Scene);
          out.push_back(scene_to_json(sample_scene(s->program, s->field, rng)));
        }
        return out;
      },
      py::arg("scenario"), py::arg("seed"), py::arg("n") = 1);

  py::class_<Environment>(m, "Env")
      .def(py::init([](const Scenario& s, std::uint64_t seed, const std::string& reward_mode, int n_rl_agents) {
             return Environment(s.ptr, make_config(seed, reward_mode, n_rl_agents));
           }),
           py::arg("scenario"), py::arg("seed") = 0, py::arg("reward_mode") = "scoring", py::arg("n_rl_agents") = 1)
      .def(
          "reset", [](Environment& e, std::uint64_t episode) { return unpack(e.reset(episode)); },
          py::arg("episode") = 0)
      .def(
          "step",
          [](Environment& e, const py::object& actions) {
            std::vector<int> codes;
            if (py::isinstance<py::int_>(actions)) {
              codes.push_back(actions.cast<int>());
            } else {
              codes = actions.cast<std::vector<int>>();
            }
            const StepResult r = e.step(codes);
            return py::make_tuple(unpack(r.obs), r.reward, r.done, info_dict(r.info));
          },
          py::arg("actions"))
      .def("packed_observation", [](const Environment& e) { return packed_bytes(e.observation()); })
      .def_property_readonly("done", &Environment::done)
      .def_property_readonly("in_episode", &Environment::in_episode)
      .def_property_readonly("controlled", &Environment::controlled)
      .def_property_readonly("tick", [](const Environment& e) { return e.world().tick; })
      .def_property_readonly("scene_json", [](const Environment& e) { return scene_to_json(e.scene()); });

  m.def(
      "run_episodes_json",
      [](const Scenario& s, const std::string& policy, int n, std::uint64_t seed) {
        const auto p = policy_of(policy);
        py::gil_scoped_release nogil;
        return suite::run_episodes(s.ptr, p, n, seed).to_json().dump();
      },
      py::arg("scenario"), py::arg("policy"), py::arg("episodes"), py::arg("seed") = 0);

  m.def(
      "report_json",
      [](const Scenario& train, const Scenario& test, const std::string& policy, int n, std::uint64_t seed) {
        const auto p = policy_of(policy);
        py::gil_scoped_release nogil;
        return suite::generalization_report(train.ptr, test.ptr, p, n, seed).to_json().dump();
      },
      py::arg("train"), py::arg("test"), py::arg("policy"), py::arg("episodes"), py::arg("seed") = 0);

  m.def(
      "catalog_json",
      [](const std::string& asset_dir) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& e : suite::list_catalog(asset_dir)) {
          nlohmann::json j{{"name", e.name}, {"category", suite::category_name(e.category)}, {"file", e.path}};
          if (e.paired_train) j["paired_train"] = *e.paired_train;
          list.push_back(std::move(j));
        }
        return list.dump();
      },
      py::arg("asset_dir"));

  m.def("decode_obs", [](const py::bytes& b) { return unpack(from_packed(b)); }, py::arg("packed"));
  m.def("encode_obs", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a) {
    return packed_bytes(pack(a));
  });
  py::class_<TraceHash>(m, "TraceHash")
      .def(py::init<>())
      .def("add_reset", [](TraceHash& h, const py::bytes& packed) { h.add_reset(from_packed(packed)); })
      .def("add_step", [](TraceHash& h, const py::bytes& packed, double reward, bool done) {
        h.add_step(from_packed(packed), reward, done);
      })
      .def_property_readonly("value", &TraceHash::value);
}
