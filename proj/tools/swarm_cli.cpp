#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "swarm/checkpoint.hpp"
#include "swarm/config.hpp"
#include "swarm/errors.hpp"
#include "swarm/perception.hpp"
#include "swarm/runner.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

swarm::SimConfig read_config(const std::string& path) {
  if (path.empty()) return swarm::SimConfig{};
  return swarm::load_config(path);
}

// --seed beats SWARM_SEED, which beats the config file.
std::uint64_t resolve_seed(const swarm::SimConfig& cfg, const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SWARM_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw swarm::ConfigError(std::string("SWARM_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return cfg.seed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predator-prey swarm simulator: PPO training, boids baseline and behavioral metrics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(swarm::code_version()));

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string model_text;

  auto* train = app.add_subcommand("train", "Train a shared policy and write checkpoint, reward curve and manifest");
  std::string train_out = "runs/train";
  std::optional<std::int64_t> train_steps;
  train->add_option("--config", config_path, "JSON config file (defaults when omitted)");
  train->add_option("--model", model_text, "lom or gom")->required();
  train->add_option("--seed", seed, "Overrides SWARM_SEED and the config seed");
  train->add_option("--out", train_out, "Output directory");
  train->add_option("--steps", train_steps, "Overrides ppo.max_steps");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint or the boids baseline");
  std::string checkpoint_path;
  bool use_boids = false;
  std::int64_t eval_steps = 10'000;
  std::optional<int> agents;
  std::string metrics_out = "metrics.csv";
  std::string trajectory_out;
  bool no_trajectory = false;
  eval->add_option("--config", config_path, "JSON config file (defaults when omitted)");
  auto* ckpt_opt = eval->add_option("--checkpoint", checkpoint_path, "Trained checkpoint");
  auto* boids_opt = eval->add_flag("--boids", use_boids, "Run the scripted boids baseline");
  ckpt_opt->excludes(boids_opt);
  eval->add_option("--model", model_text, "Observation model for the checkpoint (defaults to its own)");
  eval->add_option("--steps", eval_steps, "Ticks to simulate")->check(CLI::PositiveNumber);
  eval->add_option("--agents", agents, "Override world.n_agents")->check(CLI::PositiveNumber);
  eval->add_option("--seed", seed, "Overrides SWARM_SEED and the config seed");
  eval->add_option("--metrics-out", metrics_out, "Metrics CSV path");
  eval->add_option("--trajectory-out", trajectory_out, "Trajectory JSONL path (default: next to the metrics CSV)");
  eval->add_flag("--no-trajectory", no_trajectory, "Skip the trajectory log");

  auto* experiment = app.add_subcommand("experiment", "Run a model x population x seed grid");
  std::string grid_path;
  std::string experiment_out = "runs/experiment";
  std::optional<int> jobs;
  experiment->add_option("grid", grid_path, "Grid JSON file")->required();
  experiment->add_option("--out", experiment_out, "Output directory");
  experiment->add_option("--jobs", jobs, "Cells run concurrently")->check(CLI::PositiveNumber);

  auto* describe = app.add_subcommand("describe-obs", "Print the observation feature layout");
  std::string describe_model = "gom";
  describe->add_option("--model", describe_model, "lom or gom");

  auto* validate = app.add_subcommand("validate-config", "Check a config file and print its digest");
  std::string validate_path;
  validate->add_option("config", validate_path, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train) {
      swarm::SimConfig cfg = read_config(config_path);
      const auto model = swarm::parse_model_kind(model_text);
      if (train_steps) cfg.ppo.max_steps = *train_steps;
      cfg.seed = resolve_seed(cfg, seed);
      cfg.model = model;
      swarm::validate(cfg);
      swarm::TrainResult r = swarm::run_train(cfg, model, cfg.seed, train_out);
      std::cout << "trained " << swarm::to_string(model) << " for " << r.steps << " steps (" << r.updates
                << " updates); outputs in " << train_out << "\n";
    } else if (*eval) {
      swarm::SimConfig cfg = read_config(config_path);
      if (agents) cfg.world.n_agents = *agents;
      cfg.seed = resolve_seed(cfg, seed);
      swarm::validate(cfg);
      swarm::EvalRequest req;
      req.config = cfg;
      req.steps = eval_steps;
      req.seed = cfg.seed;
      req.metrics_out = metrics_out;
      if (!checkpoint_path.empty()) {
        req.checkpoint = checkpoint_path;
        if (!model_text.empty()) req.model = swarm::parse_model_kind(model_text);
      } else if (!use_boids) {
        throw swarm::ConfigError("eval needs --checkpoint or --boids");
      }
      if (!no_trajectory) {
        std::filesystem::path traj = trajectory_out;
        if (traj.empty()) traj = std::filesystem::path(metrics_out).replace_extension(".trajectory.jsonl");
        req.trajectory_out = traj;
      }
      const auto r = swarm::run_eval_to_files(req);
      std::cout << "evaluated " << r.ticks << " ticks, " << r.snapshots << " snapshots, " << r.total_catches
                << " catches; metrics in " << metrics_out << "\n";
    } else if (*experiment) {
      swarm::ExperimentGrid grid = swarm::load_grid(grid_path);
      if (jobs) grid.jobs = *jobs;
      const auto outcome = swarm::run_experiment(grid, experiment_out);
      std::cout << outcome.completed << " cells completed, " << outcome.failed << " failed; results in "
                << experiment_out << "\n";
      for (const auto& c : outcome.cells)
        if (!c.ok) std::cerr << "cell " << c.name << " failed: " << c.error << "\n";
      return outcome.failed == 0 ? 0 : kExitRuntime;
    } else if (*describe) {
      const auto model = swarm::parse_model_kind(describe_model);
      if (model == swarm::ModelKind::Boids) throw swarm::ConfigError("boids have no observation vector");
      nlohmann::json out = {{"model", swarm::to_string(model)},
                            {"obs_dim", swarm::observation_dim(model)},
                            {"features", nlohmann::json::array()}};
      for (const auto& f : swarm::feature_layout(model))
        out["features"].push_back({{"name", f.name}, {"offset", f.offset}});
      std::cout << out.dump(2) << "\n";
    } else if (*validate) {
      const auto cfg = swarm::load_config(validate_path);
      swarm::validate(cfg);
      std::cout << "ok " << swarm::config_digest(cfg) << "\n";
    }
  } catch (const swarm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const swarm::DimensionError& e) {
    std::cerr << "incompatible checkpoint: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
