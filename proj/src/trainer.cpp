#include "swarm/trainer.hpp"

#include <thread>

#include "swarm/perception.hpp"
#include "swarm/ppo.hpp"
#include "swarm/world.hpp"

namespace swarm {

namespace {

struct FinishedSegment {
  std::vector<Transition> transitions;
  double bootstrap = 0.0;
};

class TrainingEnv {
 public:
  TrainingEnv(const SimConfig& cfg, ModelKind model, Rng rng) : cfg_(cfg), model_(model), rng_(std::move(rng)) {
    world_ = init_world(cfg_.world, rng_.next_u64());
    const auto n = world_.agents.size();
    segments_.resize(n);
    awaiting_.assign(n, 0);
    episode_reward_.assign(n, 0.0);
  }

  std::size_t n_agents() const { return world_.agents.size(); }

  // Advances the world one tick under `params`, filling finished() and
  // completed_returns().
  void tick(const PolicyParameters& params) {
    finished_.clear();
    completed_.clear();

    const Eigen::MatrixXd obs = observations();
    const BatchOutput out = forward_batch(params, obs);
    const std::size_t n = n_agents();

    for (std::size_t i = 0; i < n; ++i)
      if (awaiting_[i]) finish(i, out.value(static_cast<Eigen::Index>(i)));

    std::vector<AgentAction> actions(n);
    std::vector<SampledAction> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto col = static_cast<Eigen::Index>(i);
      const std::array<double, kActionDim> mean{out.mean(0, col), out.mean(1, col)};
      const std::array<double, kActionDim> log_std{params.log_std(0), params.log_std(1)};
      samples[i] = sample_action(mean, log_std, rng_);
      actions[i] = to_agent_action(samples[i].raw);
    }

    const auto events = step_world(world_, actions);
    std::vector<double> reward(n, 0.0);
    std::vector<char> caught(n, 0);
    for (const auto& e : events) {
      reward[static_cast<std::size_t>(e.agent_id)] += e.value;
      if (e.kind == RewardKind::Caught) caught[static_cast<std::size_t>(e.agent_id)] = 1;
    }

    for (std::size_t i = 0; i < n; ++i) {
      const auto col = static_cast<Eigen::Index>(i);
      Transition t;
      t.observation.assign(obs.col(col).data(), obs.col(col).data() + obs.rows());
      t.action = samples[i].raw;
      t.log_prob = samples[i].log_prob;
      t.reward = reward[i];
      t.value = out.value(col);
      t.done = caught[i] != 0;
      segments_[i].push_back(std::move(t));
      episode_reward_[i] += reward[i];
      if (caught[i])
        finish(i, 0.0);
      else if (static_cast<int>(segments_[i].size()) >= cfg_.ppo.time_horizon)
        awaiting_[i] = 1;
    }

    if (world_.tick >= cfg_.world.episode_length) {
      // Time limit: bootstrap every open segment from the final state.
      const BatchOutput last = forward_batch(params, observations());
      for (std::size_t i = 0; i < n; ++i) {
        if (!segments_[i].empty()) finish(i, last.value(static_cast<Eigen::Index>(i)));
        completed_.push_back(episode_reward_[i]);
        episode_reward_[i] = 0.0;
      }
      world_ = init_world(cfg_.world, rng_.next_u64());
    }
  }

  std::vector<FinishedSegment>& finished() { return finished_; }
  const std::vector<double>& completed_returns() const { return completed_; }

 private:
  Eigen::MatrixXd observations() const {
    const auto dim = static_cast<Eigen::Index>(observation_dim(model_));
    Eigen::MatrixXd obs(dim, static_cast<Eigen::Index>(n_agents()));
    for (std::size_t i = 0; i < n_agents(); ++i) {
      const auto f = build_observation(world_, static_cast<int>(i), model_, cfg_.perception).features();
      obs.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(f.data(), dim);
    }
    return obs;
  }

  void finish(std::size_t agent, double bootstrap) {
    finished_.push_back({std::move(segments_[agent]), bootstrap});
    segments_[agent].clear();
    awaiting_[agent] = 0;
  }

  const SimConfig& cfg_;
  ModelKind model_;
  Rng rng_;
  WorldState world_;
  std::vector<std::vector<Transition>> segments_;
  std::vector<char> awaiting_;
  std::vector<double> episode_reward_;
  std::vector<FinishedSegment> finished_;
  std::vector<double> completed_;
};

}  // namespace

TrainResult train(const SimConfig& config, ModelKind model, std::uint64_t seed, const TrainHooks& hooks) {
  validate(config);
  if (model == ModelKind::Boids) throw ConfigError("boids are scripted and cannot be trained");

  const auto& ppo = config.ppo;
  const int obs_dim = static_cast<int>(observation_dim(model));
  Rng master(seed);
  Rng init_rng = master.split();
  Rng update_rng = master.split();

  TrainResult result;
  result.params = PolicyParameters::random(obs_dim, ppo.hidden_units, ppo.num_layers, init_rng, ppo.init_log_std);

  std::vector<TrainingEnv> envs;
  envs.reserve(static_cast<std::size_t>(config.training.n_envs));
  for (int e = 0; e < config.training.n_envs; ++e) envs.emplace_back(config, model, master.split());

  RolloutBuffer buffer(obs_dim);
  AdamState adam;
  double interval_sum = 0.0;
  int interval_episodes = 0;
  std::int64_t next_summary = ppo.summary_freq;

  while (result.steps < ppo.max_steps) {
    if (config.training.parallel && envs.size() > 1) {
      std::vector<std::jthread> workers;
      for (auto& env : envs) workers.emplace_back([&env, &result] { env.tick(result.params); });
    } else {
      for (auto& env : envs) env.tick(result.params);
    }

    for (auto& env : envs) {
      for (auto& seg : env.finished()) buffer.add_segment(seg.transitions, seg.bootstrap, ppo.gamma, ppo.gae_lambda);
      for (double r : env.completed_returns()) {
        interval_sum += r;
        ++interval_episodes;
      }
      result.steps += static_cast<std::int64_t>(env.n_agents());
    }

    if (result.steps >= next_summary) {
      if (interval_episodes > 0) {
        RewardPoint p{result.steps, interval_sum / interval_episodes, interval_episodes};
        result.reward_curve.push_back(p);
        if (hooks.on_summary) hooks.on_summary(p);
      }
      interval_sum = 0.0;
      interval_episodes = 0;
      next_summary = (result.steps / ppo.summary_freq + 1) * ppo.summary_freq;
    }

    if (static_cast<int>(buffer.size()) >= ppo.buffer_size) {
      PolicyParameters next;
      try {
        next = update(result.params, buffer.to_batch(), ppo, result.steps, adam, update_rng);
      } catch (const NumericalError& e) {
        throw TrainingAborted(e.what(), result.params, result.steps);
      }
      buffer.clear();
      if (!next.all_finite())
        throw TrainingAborted("training produced non-finite parameters at step " + std::to_string(result.steps),
                              result.params, result.steps);
      result.params = std::move(next);
      ++result.updates;
      if (hooks.on_checkpoint && config.training.checkpoint_interval > 0 &&
          result.updates % config.training.checkpoint_interval == 0)
        hooks.on_checkpoint(result.params, result.steps);
    }
  }
  return result;
}

}  // namespace swarm
