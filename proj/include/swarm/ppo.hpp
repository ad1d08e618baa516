#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "swarm/config.hpp"
#include "swarm/network.hpp"
#include "swarm/rng.hpp"
#include "swarm/types.hpp"

namespace swarm {

// ---- Gaussian policy head -------------------------------------------------

struct SampledAction {
  std::array<double, kActionDim> raw{};  // unclamped Gaussian draw
  double log_prob = 0.0;                 // density of `raw` (before clamping)
};

double gaussian_log_prob(std::span<const double> action, std::span<const double> mean,
                         std::span<const double> log_std);

// Differential entropy of the diagonal Gaussian.
double gaussian_entropy(std::span<const double> log_std);

SampledAction sample_action(std::span<const double> mean, std::span<const double> log_std, Rng& rng);

// raw[0] -> turn_rate, (raw[1] + 1) / 2 -> throttle, both clamped to range.
AgentAction to_agent_action(std::span<const double> raw);

// ---- Returns and advantages ----------------------------------------------

// sum_t gamma^t r_t
double discounted_return(std::span<const double> rewards, double gamma);

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values[t]
};

// values has one more entry than rewards: the bootstrap value of the state
// after the last step. dones[t] != 0 cuts the recursion after step t.
// Throws ContractViolation on length mismatch.
GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const std::uint8_t> dones, double gamma, double lambda);

// ---- Batches and loss ----------------------------------------------------

struct Transition {
  std::vector<double> observation;
  std::array<double, kActionDim> action{};
  double log_prob = 0.0;
  double reward = 0.0;
  double value = 0.0;
  bool done = false;
};

struct TransitionBatch {
  Eigen::MatrixXd observations;     // obs_dim x N
  Eigen::MatrixXd actions;          // kActionDim x N
  Eigen::VectorXd old_log_probs;    // N
  Eigen::VectorXd advantages;       // N
  Eigen::VectorXd returns;          // N

  Eigen::Index size() const { return old_log_probs.size(); }
  TransitionBatch select(std::span<const Eigen::Index> indices) const;
};

// Appends a trajectory segment, computing its advantages and return targets.
// `bootstrap_value` is V(s) of the state after the last transition (ignored
// if that transition is terminal).
class RolloutBuffer {
 public:
  explicit RolloutBuffer(int obs_dim) : obs_dim_(obs_dim) {}

  void add_segment(std::span<const Transition> segment, double bootstrap_value, double gamma, double lambda);
  std::size_t size() const { return log_probs_.size(); }
  void clear();
  TransitionBatch to_batch() const;

 private:
  int obs_dim_;
  std::vector<double> observations_;
  std::vector<double> actions_;
  std::vector<double> log_probs_;
  std::vector<double> advantages_;
  std::vector<double> returns_;
};

struct LossResult {
  double loss = 0.0;
  double policy_loss = 0.0;  // -mean clipped surrogate
  double value_loss = 0.0;   // mean squared error (before the coefficient)
  double entropy = 0.0;      // mean entropy
  double clip_fraction = 0.0;
  Eigen::VectorXd gradient;  // same layout as PolicyParameters::flatten()
};

// Per-sample clipped surrogate min(r A, clip(r, 1-eps, 1+eps) A).
double clipped_surrogate(double ratio, double advantage, double epsilon);

// loss = -mean[min(r A, clip(r) A)] + c_v mean[(V - R)^2] - beta mean[H].
// Gradients by backpropagation. Throws NumericalError on a non-finite loss.
LossResult ppo_loss(const TransitionBatch& batch, const PolicyParameters& params, const PPOConfig& cfg);

// ---- Optimizer and update --------------------------------------------------

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr, double epsilon);
};

// Linear decay from learning_rate at step 0 to 0 at max_steps (or constant).
double learning_rate_at(const PPOConfig& cfg, std::int64_t step);

// Subtract the mean and divide by the standard deviation (no-op scale for a
// constant vector).
void normalize_advantages(Eigen::VectorXd& advantages);

// num_epoch passes of shuffled minibatches over the whole batch.
PolicyParameters update(const PolicyParameters& params, const TransitionBatch& batch, const PPOConfig& cfg,
                        std::int64_t step, AdamState& adam, Rng& rng);

// Fisher-Yates with the project RNG (std::shuffle is not portable).
void shuffle_indices(std::vector<Eigen::Index>& idx, Rng& rng);

}  // namespace swarm
