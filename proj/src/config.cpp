#include "swarm/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "swarm/errors.hpp"

namespace swarm {

using nlohmann::json;

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Lom:
      return "lom";
    case ModelKind::Gom:
      return "gom";
    case ModelKind::Boids:
      return "boids";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "lom") return ModelKind::Lom;
  if (text == "gom") return ModelKind::Gom;
  if (text == "boids") return ModelKind::Boids;
  throw ConfigError("unknown model kind '" + std::string(text) + "' (expected lom, gom or boids)");
}

namespace {

// Reads one JSON object section, remembering which keys were consumed so that
// anything left over can be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where() + " must be an object");
  }

  void number(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) throw ConfigError(where(key) + " must be a number");
      out = v->get<double>();
    }
  }

  template <typename Int>
  void integer(const char* key, Int& out) {
    if (const json* v = take(key)) {
      if (v->is_number_integer()) {
        out = v->get<Int>();
      } else if (v->is_number_float() && std::floor(v->get<double>()) == v->get<double>()) {
        // Allows 5.0e8 style literals for step counts.
        out = static_cast<Int>(v->get<double>());
      } else {
        throw ConfigError(where(key) + " must be an integer");
      }
    }
  }

  void boolean(const char* key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) throw ConfigError(where(key) + " must be a boolean");
      out = v->get<bool>();
    }
  }

  void text(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ConfigError(where(key) + " must be a string");
      out = v->get<std::string>();
    }
  }

  void model(const char* key, ModelKind& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ConfigError(where(key) + " must be a string");
      out = parse_model_kind(v->get<std::string>());
    }
  }

  template <typename Fn>
  void child(const char* key, Fn&& fn) {
    if (const json* v = take(key)) {
      Section sub(*v, where(key));
      fn(sub);
      sub.finish();
    }
  }

  void finish() const {
    for (const auto& [key, _] : node_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown key " + where(key.c_str()));
    }
  }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }
  std::string where() const { return path_.empty() ? "<root>" : path_; }
  std::string where(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void validate(const WorldConfig& w) {
  require(w.width > 0.0 && w.height > 0.0, "world.width and world.height must be positive");
  require(w.n_agents >= 1, "world.n_agents must be at least 1");
  require(w.n_food >= 1, "world.n_food must be at least 1");
  require(w.agent_radius > 0.0, "world.agent_radius must be positive");
  require(w.food_radius > 0.0, "world.food_radius must be positive");
  require(w.max_turn_deg > 0.0 && w.max_turn_deg <= 180.0, "world.max_turn_deg must be in (0, 180]");
  require(w.dt > 0.0, "world.dt must be positive");
  require(w.episode_length >= 1, "world.episode_length must be at least 1");
  require(2.0 * w.agent_radius < std::min(w.width, w.height), "world.agent_radius too large for the arena");

  const auto& p = w.predator;
  require(p.speed > 0.0, "world.predator.speed must be positive");
  require(p.radius > 0.0, "world.predator.radius must be positive");
  require(p.vision_radius > 0.0, "world.predator.vision_radius must be positive");
  require(p.catch_radius > 0.0, "world.predator.catch_radius must be positive");
  require(p.max_turn_deg > 0.0 && p.max_turn_deg <= 180.0, "world.predator.max_turn_deg must be in (0, 180]");
  require(p.retarget_probability >= 0.0 && p.retarget_probability <= 1.0,
          "world.predator.retarget_probability must be in [0, 1]");
  require(2.0 * p.radius < std::min(w.width, w.height), "world.predator.radius too large for the arena");
  require(2.0 * w.food_radius < std::min(w.width, w.height), "world.food_radius too large for the arena");
}

void validate(const SimConfig& c) {
  validate(c.world);

  const auto& r = c.perception;
  require(r.n_rays == 18, "perception.n_rays is fixed at 18 by the observation layout");
  require(r.spread_deg > 0.0 && r.spread_deg < 360.0, "perception.spread_deg must be in (0, 360)");
  require(r.range > 0.0, "perception.range must be positive");

  const auto& b = c.boids;
  require(b.vision_radius > 0.0, "boids.vision_radius must be positive");
  require(b.avoid_radius > 0.0 && b.avoid_radius < b.vision_radius,
          "boids.avoid_radius must be positive and smaller than boids.vision_radius");
  const auto& bw = b.weights;
  for (double v : {bw.cohesion, bw.alignment, bw.avoidance, bw.predator_flee, bw.food_seek})
    require(v >= 0.0, "boids weights must be non-negative");
  require(bw.cohesion + bw.alignment + bw.avoidance + bw.predator_flee + bw.food_seek > 0.0,
          "at least one boids weight must be positive");

  const auto& o = c.ppo;
  require(o.clip_epsilon >= 0.1 && o.clip_epsilon <= 0.3, "ppo.epsilon must be in [0.1, 0.3]");
  require(o.gamma >= 0.0 && o.gamma < 1.0, "ppo.gamma must be in [0, 1)");
  require(o.gae_lambda >= 0.0 && o.gae_lambda <= 1.0, "ppo.lambd must be in [0, 1]");
  require(o.learning_rate > 0.0, "ppo.learning_rate must be positive");
  require(o.entropy_coeff >= 0.0, "ppo.beta must be non-negative");
  require(o.value_coeff >= 0.0, "ppo.value_coeff must be non-negative");
  require(o.batch_size >= 1, "ppo.batch_size must be at least 1");
  require(o.buffer_size >= o.batch_size, "ppo.buffer_size must be >= ppo.batch_size");
  require(o.num_epoch >= 1, "ppo.num_epoch must be at least 1");
  require(o.time_horizon >= 1, "ppo.time_horizon must be at least 1");
  require(o.max_steps >= 1, "ppo.max_steps must be at least 1");
  require(o.hidden_units >= 1, "ppo.hidden_units must be at least 1");
  require(o.num_layers >= 1, "ppo.num_layers must be at least 1");
  require(o.adam_epsilon > 0.0, "ppo.adam_epsilon must be positive");
  require(o.summary_freq >= 1, "ppo.summary_freq must be at least 1");

  require(c.training.n_envs >= 1, "training.n_envs must be at least 1");
  require(c.training.checkpoint_interval >= 0, "training.checkpoint_interval must be >= 0");

  require(c.metrics.vision_radius > 0.0, "metrics.vision_radius must be positive");
  require(c.metrics.avoid_radius > 0.0, "metrics.avoid_radius must be positive");
  require(c.metrics.predator_visibility_radius > 0.0, "metrics.predator_visibility_radius must be positive");

  require(c.aggregation.n_recordings >= 1, "aggregation.n_recordings must be at least 1");
  require(c.aggregation.frames_between >= 1, "aggregation.frames_between must be at least 1");
  require(c.aggregation.predator_window >= 1, "aggregation.predator_window must be at least 1");
}

json to_json(const SimConfig& c) {
  const auto& w = c.world;
  const auto& p = w.predator;
  const auto& o = c.ppo;
  return json{
      {"seed", c.seed},
      {"model", std::string(to_string(c.model))},
      {"world",
       {{"width", w.width},
        {"height", w.height},
        {"n_agents", w.n_agents},
        {"n_food", w.n_food},
        {"agent_radius", w.agent_radius},
        {"food_radius", w.food_radius},
        {"max_turn_deg", w.max_turn_deg},
        {"dt", w.dt},
        {"episode_length", w.episode_length},
        {"predator",
         {{"enabled", p.enabled},
          {"speed", p.speed},
          {"radius", p.radius},
          {"vision_radius", p.vision_radius},
          {"catch_radius", p.catch_radius},
          {"max_turn_deg", p.max_turn_deg},
          {"instant_turn", p.instant_turn},
          {"retarget_probability", p.retarget_probability}}}}},
      {"perception",
       {{"n_rays", c.perception.n_rays}, {"spread_deg", c.perception.spread_deg}, {"range", c.perception.range}}},
      {"boids",
       {{"vision_radius", c.boids.vision_radius},
        {"avoid_radius", c.boids.avoid_radius},
        {"cohesion_weight", c.boids.weights.cohesion},
        {"alignment_weight", c.boids.weights.alignment},
        {"avoidance_weight", c.boids.weights.avoidance},
        {"predator_flee_weight", c.boids.weights.predator_flee},
        {"food_seek_weight", c.boids.weights.food_seek}}},
      {"ppo",
       {{"epsilon", o.clip_epsilon},
        {"gamma", o.gamma},
        {"lambd", o.gae_lambda},
        {"learning_rate", o.learning_rate},
        {"learning_rate_schedule", o.linear_lr_decay ? "linear" : "constant"},
        {"beta", o.entropy_coeff},
        {"value_coeff", o.value_coeff},
        {"batch_size", o.batch_size},
        {"buffer_size", o.buffer_size},
        {"num_epoch", o.num_epoch},
        {"time_horizon", o.time_horizon},
        {"max_steps", o.max_steps},
        {"hidden_units", o.hidden_units},
        {"num_layers", o.num_layers},
        {"init_log_std", o.init_log_std},
        {"adam_epsilon", o.adam_epsilon},
        {"normalize_advantages", o.normalize_advantages},
        {"summary_freq", o.summary_freq}}},
      {"training",
       {{"n_envs", c.training.n_envs},
        {"parallel", c.training.parallel},
        {"checkpoint_interval", c.training.checkpoint_interval}}},
      {"metrics",
       {{"vision_radius", c.metrics.vision_radius},
        {"avoid_radius", c.metrics.avoid_radius},
        {"predator_visibility_radius", c.metrics.predator_visibility_radius}}},
      {"aggregation",
       {{"n_recordings", c.aggregation.n_recordings},
        {"frames_between", c.aggregation.frames_between},
        {"predator_window", c.aggregation.predator_window}}},
  };
}

SimConfig config_from_json(const json& doc) {
  SimConfig c;
  Section root(doc, "");
  root.integer("seed", c.seed);
  root.model("model", c.model);
  root.child("world", [&](Section& s) {
    auto& w = c.world;
    s.number("width", w.width);
    s.number("height", w.height);
    s.integer("n_agents", w.n_agents);
    s.integer("n_food", w.n_food);
    s.number("agent_radius", w.agent_radius);
    s.number("food_radius", w.food_radius);
    s.number("max_turn_deg", w.max_turn_deg);
    s.number("dt", w.dt);
    s.integer("episode_length", w.episode_length);
    s.child("predator", [&](Section& ps) {
      auto& p = w.predator;
      ps.boolean("enabled", p.enabled);
      ps.number("speed", p.speed);
      ps.number("radius", p.radius);
      ps.number("vision_radius", p.vision_radius);
      ps.number("catch_radius", p.catch_radius);
      ps.number("max_turn_deg", p.max_turn_deg);
      ps.boolean("instant_turn", p.instant_turn);
      ps.number("retarget_probability", p.retarget_probability);
    });
  });
  root.child("perception", [&](Section& s) {
    s.integer("n_rays", c.perception.n_rays);
    s.number("spread_deg", c.perception.spread_deg);
    s.number("range", c.perception.range);
  });
  root.child("boids", [&](Section& s) {
    s.number("vision_radius", c.boids.vision_radius);
    s.number("avoid_radius", c.boids.avoid_radius);
    s.number("cohesion_weight", c.boids.weights.cohesion);
    s.number("alignment_weight", c.boids.weights.alignment);
    s.number("avoidance_weight", c.boids.weights.avoidance);
    s.number("predator_flee_weight", c.boids.weights.predator_flee);
    s.number("food_seek_weight", c.boids.weights.food_seek);
  });
  root.child("ppo", [&](Section& s) {
    auto& o = c.ppo;
    s.number("epsilon", o.clip_epsilon);
    s.number("gamma", o.gamma);
    s.number("lambd", o.gae_lambda);
    s.number("learning_rate", o.learning_rate);
    std::string schedule = o.linear_lr_decay ? "linear" : "constant";
    s.text("learning_rate_schedule", schedule);
    if (schedule != "linear" && schedule != "constant")
      throw ConfigError("ppo.learning_rate_schedule must be 'linear' or 'constant'");
    o.linear_lr_decay = schedule == "linear";
    s.number("beta", o.entropy_coeff);
    s.number("value_coeff", o.value_coeff);
    s.integer("batch_size", o.batch_size);
    s.integer("buffer_size", o.buffer_size);
    s.integer("num_epoch", o.num_epoch);
    s.integer("time_horizon", o.time_horizon);
    s.integer("max_steps", o.max_steps);
    s.integer("hidden_units", o.hidden_units);
    s.integer("num_layers", o.num_layers);
    s.number("init_log_std", o.init_log_std);
    s.number("adam_epsilon", o.adam_epsilon);
    s.boolean("normalize_advantages", o.normalize_advantages);
    s.integer("summary_freq", o.summary_freq);
  });
  root.child("training", [&](Section& s) {
    s.integer("n_envs", c.training.n_envs);
    s.boolean("parallel", c.training.parallel);
    s.integer("checkpoint_interval", c.training.checkpoint_interval);
  });
  root.child("metrics", [&](Section& s) {
    s.number("vision_radius", c.metrics.vision_radius);
    s.number("avoid_radius", c.metrics.avoid_radius);
    s.number("predator_visibility_radius", c.metrics.predator_visibility_radius);
  });
  root.child("aggregation", [&](Section& s) {
    s.integer("n_recordings", c.aggregation.n_recordings);
    s.integer("frames_between", c.aggregation.frames_between);
    s.integer("predator_window", c.aggregation.predator_window);
  });
  root.finish();
  validate(c);
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

std::string config_digest(const SimConfig& config) {
  // nlohmann::json objects are key-sorted, so dump() is canonical.
  const std::string text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace swarm
