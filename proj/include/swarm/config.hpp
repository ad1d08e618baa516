#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace swarm {

enum class ModelKind { Lom, Gom, Boids };

std::string_view to_string(ModelKind kind);
// Accepts "lom", "gom", "boids"; throws ConfigError otherwise.
ModelKind parse_model_kind(std::string_view text);

struct PredatorConfig {
  bool enabled = true;
  double speed = 2.5;  // units/tick; prey max speed is derived from it
  double radius = 0.75;
  double vision_radius = 8.0;
  double catch_radius = 1.0;
  double max_turn_deg = 15.0;  // per tick
  bool instant_turn = false;
  // Optional comparison baseline: each prey entering the vision radius
  // becomes the target with this probability. 0 disables it.
  double retarget_probability = 0.0;

  bool operator==(const PredatorConfig&) const = default;
};

struct WorldConfig {
  double width = 50.0;
  double height = 50.0;
  int n_agents = 15;
  int n_food = 4;
  double agent_radius = 0.5;
  double food_radius = 0.5;
  double max_turn_deg = 12.0;  // per tick
  double dt = 1.0;
  int episode_length = 1000;
  PredatorConfig predator;

  // Prey are 20% slower than the predator.
  static constexpr double kPreySpeedRatio = 0.8;
  double prey_max_speed() const { return kPreySpeedRatio * predator.speed; }
  bool operator==(const WorldConfig&) const = default;
};

struct RaycastConfig {
  int n_rays = 18;
  double spread_deg = 170.0;
  double range = 10.0;
};

struct BoidWeights {
  double cohesion = 1.0;
  double alignment = 1.0;
  double avoidance = 1.5;
  double predator_flee = 2.0;
  double food_seek = 0.5;
};

struct BoidConfig {
  double vision_radius = 6.0;
  double avoid_radius = 2.0;
  BoidWeights weights;
};

struct PPOConfig {
  double clip_epsilon = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double learning_rate = 3.0e-4;
  bool linear_lr_decay = true;
  double entropy_coeff = 5.0e-3;
  double value_coeff = 0.5;
  int batch_size = 128;
  int buffer_size = 2048;
  int num_epoch = 3;
  int time_horizon = 64;
  std::int64_t max_steps = 1'000'000;
  int hidden_units = 128;
  int num_layers = 2;
  double init_log_std = 0.0;
  double adam_epsilon = 1.0e-8;
  bool normalize_advantages = true;
  int summary_freq = 1000;
};

struct TrainingConfig {
  int n_envs = 1;
  bool parallel = false;
  int checkpoint_interval = 50;  // in updates; 0 disables periodic checkpoints
};

struct MetricsConfig {
  double vision_radius = 6.0;
  double avoid_radius = 2.0;
  // Predator-avoidance error under the local rule is only sampled when the
  // predator is closer than this.
  double predator_visibility_radius = 10.0;
};

struct AggregationConfig {
  int n_recordings = 100;
  int frames_between = 100;
  int predator_window = 10'000;
};

struct SimConfig {
  std::uint64_t seed = 0;
  ModelKind model = ModelKind::Lom;
  WorldConfig world;
  RaycastConfig perception;
  BoidConfig boids;
  PPOConfig ppo;
  TrainingConfig training;
  MetricsConfig metrics;
  AggregationConfig aggregation;
};

// Throws ConfigError describing the first violated constraint.
void validate(const WorldConfig& world);
void validate(const SimConfig& config);

nlohmann::json to_json(const SimConfig& config);
// Missing keys keep their defaults; unknown keys and wrong types are errors.
SimConfig config_from_json(const nlohmann::json& doc);
SimConfig load_config(const std::string& path);

// Hex FNV-1a 64 over the canonical (key-sorted) JSON form.
std::string config_digest(const SimConfig& config);

}  // namespace swarm
