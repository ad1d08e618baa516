#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "swarm/checkpoint.hpp"
#include "swarm/config.hpp"
#include "swarm/metrics.hpp"
#include "swarm/trainer.hpp"
#include "swarm/world.hpp"

namespace swarm {

std::string_view code_version();

// Produces one action per agent for the current state.
using Controller = std::function<std::vector<AgentAction>(const WorldState&)>;

Controller boids_controller(const BoidConfig& cfg);
// Frozen policy: acts on the Gaussian mean, no sampling.
Controller policy_controller(PolicyParameters params, ModelKind model, const RaycastConfig& perception);
// Uniform random turn rate and throttle.
Controller random_controller(std::uint64_t seed);

struct EvalResult {
  std::int64_t ticks = 0;
  AggregationConfig aggregation;  // the protocol actually applied
  int snapshots = 0;
  MetricsRecord summary;
  std::vector<PredatorStats> windows;
  std::int64_t total_catches = 0;
  double mean_reward = 0.0;  // per agent per tick
};

// The 100 x 100 protocol when the run is long enough; shorter runs take as many
// snapshots as fit (at least one, at the final tick).
AggregationConfig eval_aggregation(const AggregationConfig& requested, std::int64_t steps);

// Runs `steps` ticks without resets. Writes one trajectory line per tick
// (tick 0 included) when `trajectory` is given.
EvalResult run_eval(const SimConfig& cfg, const Controller& controller, std::int64_t steps, std::uint64_t seed,
                    std::ostream* trajectory = nullptr);

// Summary row followed by one row per predator window.
std::vector<std::string> metrics_csv_columns();
void write_metrics_csv(std::ostream& out, const EvalResult& result);

struct RunManifest {
  std::string command;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string model;
  std::int64_t start_tick = 0;
  std::int64_t end_tick = 0;
  std::string status = "ok";
  std::string error;
  std::vector<std::pair<std::string, std::string>> outputs;

  nlohmann::json to_json() const;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

// Trains and writes checkpoint.json, reward_curve.csv and manifest.json into
// out_dir. On TrainingAborted the last good checkpoint is still written and
// the exception is rethrown.
TrainResult run_train(const SimConfig& cfg, ModelKind model, std::uint64_t seed, const std::filesystem::path& out_dir);

struct EvalRequest {
  SimConfig config;
  std::optional<std::filesystem::path> checkpoint;  // absent: boids baseline
  std::optional<ModelKind> model;                   // defaults to the checkpoint's kind
  std::int64_t steps = 10'000;
  std::uint64_t seed = 0;
  std::filesystem::path metrics_out;
  std::optional<std::filesystem::path> trajectory_out;
};

EvalResult run_eval_to_files(const EvalRequest& request);

struct ExperimentGrid {
  SimConfig base;
  std::vector<std::string> models;  // validated per cell, so one bad entry fails one cell
  std::vector<int> populations;
  std::vector<std::uint64_t> seeds;
  std::int64_t train_steps = 1'000'000;
  std::int64_t eval_steps = 10'000;
  int jobs = 1;
};

ExperimentGrid grid_from_json(const nlohmann::json& doc);
ExperimentGrid load_grid(const std::string& path);

struct CellOutcome {
  std::string name;
  std::string model;
  int n_agents = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  EvalResult eval;
};

struct ExperimentOutcome {
  std::vector<CellOutcome> cells;
  int completed = 0;
  int failed = 0;
};

// One directory per (model, population, seed) cell plus comparison.csv and
// experiment_manifest.json in out_dir. Failures are recorded, not fatal.
ExperimentOutcome run_experiment(const ExperimentGrid& grid, const std::filesystem::path& out_dir);

}  // namespace swarm
