#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/errors.hpp"
#include "swarm/network.hpp"

namespace swarm {

struct RewardPoint {
  std::int64_t step = 0;
  double mean_cumulative_reward = 0.0;
  int episodes = 0;  // agent-episodes completed since the previous point
};

struct TrainHooks {
  // Called every checkpoint_interval updates with the freshly updated parameters.
  std::function<void(const PolicyParameters&, std::int64_t step)> on_checkpoint;
  std::function<void(const RewardPoint&)> on_summary;
};

struct TrainResult {
  PolicyParameters params;
  std::vector<RewardPoint> reward_curve;
  std::int64_t steps = 0;
  int updates = 0;
};

// Training stopped because an update produced non-finite parameters.
class TrainingAborted : public NumericalError {
 public:
  TrainingAborted(const std::string& what, PolicyParameters last_good, std::int64_t step)
      : NumericalError(what), last_good_(std::move(last_good)), step_(step) {}
  const PolicyParameters& last_good() const { return last_good_; }
  std::int64_t step() const { return step_; }

 private:
  PolicyParameters last_good_;
  std::int64_t step_;
};

/// Trains one policy shared by every prey in `config.training.n_envs` worlds.
///
/// A step is one agent decision, so a tick of a 15-agent world adds 15 steps.
/// Each agent's experience is cut into segments of at most time_horizon
/// transitions; a segment ends early when the agent is caught (terminal) and
/// otherwise bootstraps from the value of the next observation. Worlds are
/// reset every episode_length ticks. The cumulative reward of an agent over
/// one world episode feeds the reward curve, reported every summary_freq steps.
///
/// Every world owns its RNG stream, so parallel and sequential collection give
/// identical results.
TrainResult train(const SimConfig& config, ModelKind model, std::uint64_t seed, const TrainHooks& hooks = {});

}  // namespace swarm
