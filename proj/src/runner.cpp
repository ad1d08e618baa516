#include "swarm/runner.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "swarm/boids.hpp"
#include "swarm/errors.hpp"
#include "swarm/perception.hpp"
#include "swarm/ppo.hpp"
#include "swarm/trajectory.hpp"

#ifndef SWARM_VERSION
#define SWARM_VERSION "0.0.0"
#endif

namespace swarm {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view code_version() { return SWARM_VERSION; }

Controller boids_controller(const BoidConfig& cfg) {
  return [cfg](const WorldState& s) { return boid_actions(s, cfg); };
}

Controller policy_controller(PolicyParameters params, ModelKind model, const RaycastConfig& perception) {
  return [params = std::move(params), model, perception](const WorldState& s) {
    std::vector<AgentAction> actions;
    actions.reserve(s.agents.size());
    for (const auto& a : s.agents) {
      const auto obs = build_observation(s, a.id, model, perception).features();
      const PolicyOutput out = forward(params, obs);
      actions.push_back(to_agent_action(out.mean));
    }
    return actions;
  };
}

Controller random_controller(std::uint64_t seed) {
  auto rng = std::make_shared<Rng>(seed);
  return [rng](const WorldState& s) {
    std::vector<AgentAction> actions(s.agents.size());
    for (auto& a : actions) a = {rng->uniform(-1.0, 1.0), rng->uniform()};
    return actions;
  };
}

AggregationConfig eval_aggregation(const AggregationConfig& requested, std::int64_t steps) {
  AggregationConfig cfg = requested;
  if (steps < cfg.frames_between) {
    cfg.frames_between = static_cast<int>(std::max<std::int64_t>(steps, 1));
    cfg.n_recordings = 1;
  } else {
    cfg.n_recordings = static_cast<int>(std::min<std::int64_t>(cfg.n_recordings, steps / cfg.frames_between));
  }
  return cfg;
}

EvalResult run_eval(const SimConfig& cfg, const Controller& controller, std::int64_t steps, std::uint64_t seed,
                    std::ostream* trajectory) {
  if (steps < 1) throw ContractViolation("run_eval: steps must be >= 1");
  WorldState world = init_world(cfg.world, seed);
  EvalResult result;
  result.aggregation = eval_aggregation(cfg.aggregation, steps);
  Aggregator agg(result.aggregation);
  std::vector<PredatorTick> ticks;
  ticks.reserve(static_cast<std::size_t>(steps));

  std::optional<TrajectoryWriter> writer;
  if (trajectory) {
    writer.emplace(*trajectory);
    writer->write(world, {});
  }

  double reward = 0.0;
  for (std::int64_t t = 0; t < steps; ++t) {
    const auto actions = controller(world);
    const auto events = step_world(world, actions);
    int catches = 0;
    for (const auto& e : events) {
      reward += e.value;
      if (e.kind == RewardKind::Caught) ++catches;
    }
    ticks.push_back({world.tick, catches, static_cast<int>(world.predator.memory.size())});
    result.total_catches += catches;
    if (agg.wants(world.tick)) agg.add(world.tick, compute_metrics(world, cfg.metrics));
    if (writer) writer->write(world, events);
  }

  result.ticks = world.tick;
  result.snapshots = agg.snapshots();
  result.summary = agg.summary();
  result.windows = predator_stats(ticks, cfg.aggregation.predator_window);
  result.mean_reward = reward / (static_cast<double>(steps) * static_cast<double>(world.agents.size()));
  return result;
}

namespace {

constexpr Metric kCsvMetrics[] = {Metric::Alignment,        Metric::Cohesion,         Metric::NeighborAvoidance,
                                  Metric::PredatorAvoidance, Metric::Foraging,         Metric::GroupingDistance,
                                  Metric::PredatorDistance,  Metric::NeighborCount,    Metric::PredatorAvoidanceGlobal};

std::string fmt_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_optional(std::optional<double> v) { return v ? fmt_number(*v) : std::string(); }

std::string samples_field(const MetricsRecord& r) {
  std::string s;
  for (Metric m : kCsvMetrics) {
    if (!s.empty()) s += ';';
    s += std::to_string(r.count(m));
  }
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

std::vector<std::string> metrics_csv_columns() {
  return {"tick",          "alignment_err",  "cohesion_err",       "neighbor_avoid_err",
          "predator_avoid_err", "foraging_err", "grouping_dist",   "predator_dist",
          "neighbor_count", "samples_per_metric", "catch_count_window", "mean_memory_size_window",
          "predator_avoid_err_global"};
}

void write_metrics_csv(std::ostream& out, const EvalResult& r) {
  const auto cols = metrics_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';

  const auto& s = r.summary;
  out << r.ticks;
  for (Metric m : {Metric::Alignment, Metric::Cohesion, Metric::NeighborAvoidance, Metric::PredatorAvoidance,
                   Metric::Foraging, Metric::GroupingDistance, Metric::PredatorDistance, Metric::NeighborCount})
    out << ',' << fmt_optional(s[m]);
  out << ',' << samples_field(s) << ",,," << fmt_optional(s[Metric::PredatorAvoidanceGlobal]) << '\n';

  for (const auto& w : r.windows) {
    out << w.window_end << ",,,,,,,,,," << w.catch_count << ',' << fmt_number(w.mean_memory_size) << ",\n";
  }
}

json RunManifest::to_json() const {
  json outs = json::object();
  for (const auto& [k, v] : outputs) outs[k] = v;
  json j = {{"command", command},
            {"config_digest", config_digest},
            {"seed", seed},
            {"model", model},
            {"code_version", std::string(code_version())},
            {"start_tick", start_tick},
            {"end_tick", end_tick},
            {"status", status},
            {"outputs", outs}};
  if (!error.empty()) j["error"] = error;
  return j;
}

void write_manifest(const fs::path& path, const RunManifest& manifest) {
  write_text(path, manifest.to_json().dump(2) + "\n");
}

TrainResult run_train(const SimConfig& cfg, ModelKind model, std::uint64_t seed, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const std::string digest = config_digest(cfg);
  const fs::path ckpt_path = out_dir / "checkpoint.json";
  const fs::path curve_path = out_dir / "reward_curve.csv";

  RunManifest manifest;
  manifest.command = "train";
  manifest.config_digest = digest;
  manifest.seed = seed;
  manifest.model = std::string(to_string(model));
  manifest.outputs = {{"checkpoint", ckpt_path.string()}, {"reward_curve", curve_path.string()}};

  TrainHooks hooks;
  hooks.on_checkpoint = [&](const PolicyParameters& p, std::int64_t step) {
    save_checkpoint(ckpt_path.string(), {model, p, step, digest});
  };

  auto write_curve = [&](const std::vector<RewardPoint>& curve) {
    std::ostringstream csv;
    csv << "step,mean_cumulative_reward\n";
    for (const auto& p : curve) csv << p.step << ',' << fmt_number(p.mean_cumulative_reward) << '\n';
    write_text(curve_path, csv.str());
  };

  try {
    TrainResult result = train(cfg, model, seed, hooks);
    save_checkpoint(ckpt_path.string(), {model, result.params, result.steps, digest});
    write_curve(result.reward_curve);
    manifest.end_tick = result.steps;
    write_manifest(out_dir / "manifest.json", manifest);
    return result;
  } catch (const TrainingAborted& e) {
    save_checkpoint(ckpt_path.string(), {model, e.last_good(), e.step(), digest});
    manifest.status = "aborted";
    manifest.error = e.what();
    manifest.end_tick = e.step();
    write_manifest(out_dir / "manifest.json", manifest);
    throw;
  }
}

EvalResult run_eval_to_files(const EvalRequest& req) {
  SimConfig cfg = req.config;
  Controller controller;
  std::string model_name = "boids";
  if (req.checkpoint) {
    const Checkpoint ckpt = load_checkpoint(req.checkpoint->string());
    const ModelKind model = req.model.value_or(ckpt.model);
    if (model == ModelKind::Boids) throw ConfigError("a checkpoint cannot be evaluated as the boids baseline");
    require_compatible(ckpt, model);
    controller = policy_controller(ckpt.params, model, cfg.perception);
    model_name = std::string(to_string(model));
  } else {
    controller = boids_controller(cfg.boids);
  }

  std::optional<std::ofstream> traj;
  if (req.trajectory_out) {
    if (req.trajectory_out->has_parent_path()) fs::create_directories(req.trajectory_out->parent_path());
    traj.emplace(*req.trajectory_out, std::ios::binary | std::ios::trunc);
    if (!*traj) throw std::runtime_error("cannot write '" + req.trajectory_out->string() + "'");
  }
  const EvalResult result = run_eval(cfg, controller, req.steps, req.seed, traj ? &*traj : nullptr);

  std::ostringstream csv;
  write_metrics_csv(csv, result);
  write_text(req.metrics_out, csv.str());

  RunManifest manifest;
  manifest.command = "eval";
  manifest.config_digest = config_digest(cfg);
  manifest.seed = req.seed;
  manifest.model = model_name;
  manifest.end_tick = result.ticks;
  manifest.outputs.push_back({"metrics", req.metrics_out.string()});
  if (req.trajectory_out) manifest.outputs.push_back({"trajectory", req.trajectory_out->string()});
  if (req.checkpoint) manifest.outputs.push_back({"checkpoint_in", req.checkpoint->string()});
  fs::path manifest_path = req.metrics_out;
  manifest_path.replace_filename(req.metrics_out.stem().string() + ".manifest.json");
  write_manifest(manifest_path, manifest);
  return result;
}

ExperimentGrid grid_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw ConfigError("experiment grid must be a JSON object");
    static const std::set<std::string> known = {"base", "models", "populations", "seeds",
                                                "train_steps", "eval_steps", "jobs"};
    for (const auto& [k, _] : doc.items())
      if (!known.contains(k)) throw ConfigError("unknown key " + k + " in experiment grid");
    ExperimentGrid g;
    if (doc.contains("base")) g.base = config_from_json(doc["base"]);
    g.models = doc.value("models", std::vector<std::string>{"lom", "gom", "boids"});
    g.populations = doc.value("populations", std::vector<int>{15, 60});
    g.seeds = doc.value("seeds", std::vector<std::uint64_t>{1});
    g.train_steps = doc.value("train_steps", g.train_steps);
    g.eval_steps = doc.value("eval_steps", g.eval_steps);
    g.jobs = doc.value("jobs", 1);
    if (g.models.empty() || g.populations.empty() || g.seeds.empty())
      throw ConfigError("experiment grid needs at least one model, population and seed");
    if (g.train_steps < 1 || g.eval_steps < 1 || g.jobs < 1)
      throw ConfigError("train_steps, eval_steps and jobs must be positive");
    return g;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment grid: ") + e.what());
  }
}

ExperimentGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open experiment grid '" + path + "'");
  try {
    return grid_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("experiment grid '" + path + "' is not valid JSON: " + e.what());
  }
}

namespace {

CellOutcome run_cell(const ExperimentGrid& grid, const std::string& model_name, int n_agents, std::uint64_t seed,
                     const fs::path& out_dir) {
  CellOutcome cell;
  cell.model = model_name;
  cell.n_agents = n_agents;
  cell.seed = seed;
  cell.name = model_name + "_n" + std::to_string(n_agents) + "_s" + std::to_string(seed);
  const fs::path dir = out_dir / cell.name;
  try {
    const ModelKind model = parse_model_kind(model_name);
    SimConfig cfg = grid.base;
    cfg.model = model;
    cfg.seed = seed;
    cfg.world.n_agents = n_agents;
    cfg.ppo.max_steps = grid.train_steps;
    validate(cfg);
    fs::create_directories(dir);

    EvalRequest req;
    req.config = cfg;
    req.steps = grid.eval_steps;
    req.seed = seed;
    req.metrics_out = dir / "metrics.csv";
    if (model != ModelKind::Boids) {
      run_train(cfg, model, seed, dir);
      req.checkpoint = dir / "checkpoint.json";
      req.model = model;
    }
    cell.eval = run_eval_to_files(req);
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentGrid& grid, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  struct CellKey {
    std::string model;
    int n;
    std::uint64_t seed;
  };
  std::vector<CellKey> keys;
  for (const auto& m : grid.models)
    for (int n : grid.populations)
      for (auto s : grid.seeds) keys.push_back({m, n, s});

  ExperimentOutcome outcome;
  outcome.cells.resize(keys.size());
  if (grid.jobs <= 1) {
    for (std::size_t i = 0; i < keys.size(); ++i)
      outcome.cells[i] = run_cell(grid, keys[i].model, keys[i].n, keys[i].seed, out_dir);
  } else {
    for (std::size_t start = 0; start < keys.size(); start += static_cast<std::size_t>(grid.jobs)) {
      std::vector<std::future<CellOutcome>> batch;
      const std::size_t end = std::min(keys.size(), start + static_cast<std::size_t>(grid.jobs));
      for (std::size_t i = start; i < end; ++i)
        batch.push_back(std::async(std::launch::async, run_cell, std::cref(grid), keys[i].model, keys[i].n,
                                   keys[i].seed, out_dir));
      for (std::size_t i = start; i < end; ++i) outcome.cells[i] = batch[i - start].get();
    }
  }

  std::ostringstream csv;
  csv << "model,n_agents,seed,status";
  for (Metric m : kCsvMetrics) csv << ',' << metric_name(m);
  csv << ",total_catches,mean_memory_size,snapshots\n";
  json cells = json::array();
  for (const auto& c : outcome.cells) {
    csv << c.model << ',' << c.n_agents << ',' << c.seed << ',' << (c.ok ? "ok" : "failed");
    double memory = 0.0;
    for (const auto& w : c.eval.windows) memory += w.mean_memory_size;
    for (Metric m : kCsvMetrics) csv << ',' << (c.ok ? fmt_optional(c.eval.summary[m]) : std::string());
    if (c.ok)
      csv << ',' << c.eval.total_catches << ','
          << fmt_number(c.eval.windows.empty() ? 0.0 : memory / static_cast<double>(c.eval.windows.size())) << ','
          << c.eval.snapshots << '\n';
    else
      csv << ",,,\n";
    json entry = {{"cell", c.name}, {"status", c.ok ? "ok" : "failed"}};
    if (!c.ok) entry["error"] = c.error;
    cells.push_back(entry);
    c.ok ? ++outcome.completed : ++outcome.failed;
  }
  write_text(out_dir / "comparison.csv", csv.str());

  json manifest = {{"command", "experiment"},
                   {"code_version", std::string(code_version())},
                   {"base_config_digest", config_digest(grid.base)},
                   {"completed", outcome.completed},
                   {"failed", outcome.failed},
                   {"cells", cells}};
  write_text(out_dir / "experiment_manifest.json", manifest.dump(2) + "\n");
  return outcome;
}

}  // namespace swarm
