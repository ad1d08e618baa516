#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>

#include "swarm/boids.hpp"
#include "swarm/checkpoint.hpp"
#include "swarm/config.hpp"
#include "swarm/errors.hpp"
#include "swarm/metrics.hpp"
#include "swarm/perception.hpp"
#include "swarm/ppo.hpp"
#include "swarm/runner.hpp"
#include "swarm/world.hpp"

namespace py = pybind11;
using namespace swarm;

namespace {

// Python objects cross the boundary as JSON text; the config schema is small.
nlohmann::json to_json_doc(const py::object& obj) {
  if (obj.is_none()) return nlohmann::json::object();
  const std::string text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return nlohmann::json::parse(text);
}

py::object to_python(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

SimConfig config_arg(const py::object& obj) {
  SimConfig c = config_from_json(to_json_doc(obj));
  validate(c);
  return c;
}

py::dict record_dict(const MetricsRecord& r) {
  py::dict out;
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    const auto name = metric_name(static_cast<Metric>(i));
    out[py::str(name)] = r.values[i] ? py::cast(*r.values[i]) : py::none();
  }
  return out;
}

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

class PyWorld {
 public:
  PyWorld(const py::object& config, std::uint64_t seed) : cfg_(config_arg(config)), state_(init_world(cfg_.world, seed)) {}

  std::vector<std::tuple<int, std::string, double>> step(const std::vector<std::pair<double, double>>& actions) {
    std::vector<AgentAction> acts;
    acts.reserve(actions.size());
    for (const auto& [turn, throttle] : actions) acts.push_back({turn, throttle});
    std::vector<std::tuple<int, std::string, double>> out;
    for (const auto& e : step_world(state_, acts)) out.emplace_back(e.agent_id, std::string(to_string(e.kind)), e.value);
    return out;
  }

  std::vector<std::pair<double, double>> boids_actions() const {
    std::vector<std::pair<double, double>> out;
    for (const auto& a : swarm::boid_actions(state_, cfg_.boids)) out.emplace_back(a.turn_rate, a.throttle);
    return out;
  }

  py::array_t<double> positions() const {
    py::array_t<double> out({static_cast<py::ssize_t>(state_.agents.size()), py::ssize_t{2}});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < state_.agents.size(); ++i) {
      m(i, 0) = state_.agents[i].position.x;
      m(i, 1) = state_.agents[i].position.y;
    }
    return out;
  }

  py::array_t<double> headings() const {
    py::array_t<double> out({static_cast<py::ssize_t>(state_.agents.size()), py::ssize_t{2}});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < state_.agents.size(); ++i) {
      m(i, 0) = state_.agents[i].heading.x;
      m(i, 1) = state_.agents[i].heading.y;
    }
    return out;
  }

  py::array_t<double> observation(int agent_id, const std::string& model) const {
    return as_array(build_observation(state_, agent_id, parse_model_kind(model), cfg_.perception).features());
  }

  py::dict metrics() const { return record_dict(compute_metrics(state_, cfg_.metrics)); }

  std::int64_t tick() const { return state_.tick; }
  std::pair<double, double> predator_position() const {
    return {state_.predator.position.x, state_.predator.position.y};
  }
  std::vector<int> predator_memory() const { return state_.predator.memory; }
  std::vector<std::pair<double, double>> food() const {
    std::vector<std::pair<double, double>> out;
    for (const auto& f : state_.food) out.emplace_back(f.position.x, f.position.y);
    return out;
  }

 private:
  SimConfig cfg_;
  WorldState state_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Predator-prey swarm simulator, PPO trainer and boids baseline";

  auto base = py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<LookupError>(m, "AgentLookupError", PyExc_KeyError);

  m.attr("__version__") = std::string(code_version());

  m.def("default_config", [] { return to_python(to_json(SimConfig{})); }, "Full default configuration as a dict.");
  m.def(
      "config_digest", [](const py::object& cfg) { return config_digest(config_arg(cfg)); }, py::arg("config"),
      "Validate a (partial) configuration and return its digest.");
  m.def(
      "observation_dim", [](const std::string& model) { return observation_dim(parse_model_kind(model)); },
      py::arg("model"));
  m.def(
      "feature_layout",
      [](const std::string& model) {
        std::vector<std::pair<std::string, std::size_t>> out;
        for (const auto& f : feature_layout(parse_model_kind(model))) out.emplace_back(f.name, f.offset);
        return out;
      },
      py::arg("model"));

  m.def(
      "compute_gae",
      [](const std::vector<double>& rewards, const std::vector<double>& values, const std::vector<bool>& dones,
         double gamma, double lam) {
        std::vector<std::uint8_t> d(dones.begin(), dones.end());
        const GaeResult g = compute_gae(rewards, values, d, gamma, lam);
        return py::make_tuple(as_array(g.advantages), as_array(g.returns));
      },
      py::arg("rewards"), py::arg("values"), py::arg("dones"), py::arg("gamma") = 0.99, py::arg("lam") = 0.95);
  m.def("discounted_return", [](const std::vector<double>& r, double gamma) { return discounted_return(r, gamma); },
        py::arg("rewards"), py::arg("gamma"));

  py::class_<PyWorld>(m, "World")
      .def(py::init<const py::object&, std::uint64_t>(), py::arg("config") = py::none(), py::arg("seed") = 0)
      .def("step", &PyWorld::step, py::arg("actions"),
           "Advance one tick with one (turn_rate, throttle) pair per agent; returns (agent, kind, value) events.")
      .def("boids_actions", &PyWorld::boids_actions)
      .def("observation", &PyWorld::observation, py::arg("agent_id"), py::arg("model") = "gom")
      .def("metrics", &PyWorld::metrics)
      .def_property_readonly("tick", &PyWorld::tick)
      .def_property_readonly("positions", &PyWorld::positions)
      .def_property_readonly("headings", &PyWorld::headings)
      .def_property_readonly("predator_position", &PyWorld::predator_position)
      .def_property_readonly("predator_memory", &PyWorld::predator_memory)
      .def_property_readonly("food", &PyWorld::food);

  m.def(
      "evaluate",
      [](const py::object& config, std::int64_t steps, std::uint64_t seed,
         std::optional<std::filesystem::path> checkpoint) {
        const SimConfig cfg = config_arg(config);
        Controller ctl = boids_controller(cfg.boids);
        if (checkpoint) {
          const Checkpoint ck = load_checkpoint(checkpoint->string());
          ctl = policy_controller(ck.params, ck.model, cfg.perception);
        }
        EvalResult r;
        {
          py::gil_scoped_release release;
          r = run_eval(cfg, ctl, steps, seed);
        }
        py::dict out;
        out["summary"] = record_dict(r.summary);
        out["snapshots"] = r.snapshots;
        out["total_catches"] = r.total_catches;
        out["mean_reward"] = r.mean_reward;
        py::list windows;
        for (const auto& w : r.windows) {
          py::dict d;
          d["window_start"] = w.window_start;
          d["window_end"] = w.window_end;
          d["catch_count"] = w.catch_count;
          d["mean_memory_size"] = w.mean_memory_size;
          windows.append(d);
        }
        out["windows"] = windows;
        return out;
      },
      py::arg("config") = py::none(), py::arg("steps") = 10'000, py::arg("seed") = 0,
      py::arg("checkpoint") = py::none(), "Run an evaluation; boids unless a checkpoint is given.");

  m.def(
      "train",
      [](const py::object& config, const std::string& model, std::uint64_t seed, const std::filesystem::path& out_dir) {
        const SimConfig cfg = config_arg(config);
        TrainResult r;
        {
          py::gil_scoped_release release;
          r = run_train(cfg, parse_model_kind(model), seed, out_dir);
        }
        std::vector<std::pair<std::int64_t, double>> curve;
        for (const auto& p : r.reward_curve) curve.emplace_back(p.step, p.mean_cumulative_reward);
        return curve;
      },
      py::arg("config"), py::arg("model"), py::arg("seed"), py::arg("out_dir"),
      "Train a shared policy and write checkpoint.json, reward_curve.csv and manifest.json into out_dir.");
}
