#include "swarm/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "swarm/errors.hpp"

namespace swarm {

namespace {
const double kLogTwoPi = std::log(2.0 * std::numbers::pi);
}

double gaussian_log_prob(std::span<const double> action, std::span<const double> mean,
                         std::span<const double> log_std) {
  double lp = 0.0;
  for (std::size_t j = 0; j < action.size(); ++j) {
    const double z = (action[j] - mean[j]) / std::exp(log_std[j]);
    lp += -0.5 * z * z - log_std[j] - 0.5 * kLogTwoPi;
  }
  return lp;
}

double gaussian_entropy(std::span<const double> log_std) {
  double h = 0.0;
  for (double s : log_std) h += s + 0.5 * (1.0 + kLogTwoPi);
  return h;
}

SampledAction sample_action(std::span<const double> mean, std::span<const double> log_std, Rng& rng) {
  SampledAction out;
  for (std::size_t j = 0; j < kActionDim; ++j) out.raw[j] = mean[j] + std::exp(log_std[j]) * rng.normal();
  out.log_prob = gaussian_log_prob(out.raw, mean, log_std);
  return out;
}

AgentAction to_agent_action(std::span<const double> raw) {
  return AgentAction{raw[0], 0.5 * (raw[1] + 1.0)}.clamped();
}

double discounted_return(std::span<const double> rewards, double gamma) {
  double total = 0.0;
  for (auto it = rewards.rbegin(); it != rewards.rend(); ++it) total = *it + gamma * total;
  return total;
}

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const std::uint8_t> dones, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n + 1 || dones.size() != n)
    throw ContractViolation("compute_gae: need |values| = |rewards| + 1 and |dones| = |rewards|, got " +
                            std::to_string(values.size()) + ", " + std::to_string(n) + ", " +
                            std::to_string(dones.size()));
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double running = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    const double live = dones[k] ? 0.0 : 1.0;
    const double delta = rewards[k] + gamma * values[k + 1] * live - values[k];
    running = delta + gamma * lambda * live * running;
    out.advantages[k] = running;
    out.returns[k] = running + values[k];
  }
  return out;
}

TransitionBatch TransitionBatch::select(std::span<const Eigen::Index> indices) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  TransitionBatch b;
  b.observations.resize(observations.rows(), n);
  b.actions.resize(actions.rows(), n);
  b.old_log_probs.resize(n);
  b.advantages.resize(n);
  b.returns.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = indices[static_cast<std::size_t>(k)];
    b.observations.col(k) = observations.col(i);
    b.actions.col(k) = actions.col(i);
    b.old_log_probs(k) = old_log_probs(i);
    b.advantages(k) = advantages(i);
    b.returns(k) = returns(i);
  }
  return b;
}

void RolloutBuffer::add_segment(std::span<const Transition> segment, double bootstrap_value, double gamma,
                                double lambda) {
  std::vector<double> rewards, values;
  std::vector<std::uint8_t> dones;
  for (const auto& t : segment) {
    if (static_cast<int>(t.observation.size()) != obs_dim_)
      throw ContractViolation("RolloutBuffer: observation width mismatch");
    rewards.push_back(t.reward);
    values.push_back(t.value);
    dones.push_back(t.done ? 1 : 0);
  }
  values.push_back(bootstrap_value);
  const GaeResult gae = compute_gae(rewards, values, dones, gamma, lambda);
  for (std::size_t k = 0; k < segment.size(); ++k) {
    const auto& t = segment[k];
    observations_.insert(observations_.end(), t.observation.begin(), t.observation.end());
    actions_.insert(actions_.end(), t.action.begin(), t.action.end());
    log_probs_.push_back(t.log_prob);
    advantages_.push_back(gae.advantages[k]);
    returns_.push_back(gae.returns[k]);
  }
}

void RolloutBuffer::clear() {
  observations_.clear();
  actions_.clear();
  log_probs_.clear();
  advantages_.clear();
  returns_.clear();
}

TransitionBatch RolloutBuffer::to_batch() const {
  const auto n = static_cast<Eigen::Index>(size());
  TransitionBatch b;
  b.observations = Eigen::Map<const Eigen::MatrixXd>(observations_.data(), obs_dim_, n);
  b.actions = Eigen::Map<const Eigen::MatrixXd>(actions_.data(), kActionDim, n);
  b.old_log_probs = Eigen::Map<const Eigen::VectorXd>(log_probs_.data(), n);
  b.advantages = Eigen::Map<const Eigen::VectorXd>(advantages_.data(), n);
  b.returns = Eigen::Map<const Eigen::VectorXd>(returns_.data(), n);
  return b;
}

double clipped_surrogate(double ratio, double advantage, double epsilon) {
  return std::min(ratio * advantage, std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon) * advantage);
}

LossResult ppo_loss(const TransitionBatch& batch, const PolicyParameters& params, const PPOConfig& cfg) {
  const Eigen::Index n = batch.size();
  if (n == 0) throw ContractViolation("ppo_loss: empty batch");
  if (batch.observations.rows() != params.obs_dim())
    throw ContractViolation("ppo_loss: observation width " + std::to_string(batch.observations.rows()) +
                            " does not match network input " + std::to_string(params.obs_dim()));
  const double inv_n = 1.0 / static_cast<double>(n);
  const double eps = cfg.clip_epsilon;

  // Forward, keeping activations for the backward pass.
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(params.trunk.size() + 1);
  acts.push_back(batch.observations);
  for (const auto& l : params.trunk)
    acts.push_back(((l.weight * acts.back()).colwise() + l.bias).array().tanh().matrix());
  const Eigen::MatrixXd& top = acts.back();
  const Eigen::MatrixXd mean = (params.mean_head.weight * top).colwise() + params.mean_head.bias;
  const Eigen::RowVectorXd value = (params.value_head.weight * top).array() + params.value_head.bias(0);

  const Eigen::VectorXd sigma = params.log_std.array().exp();
  const Eigen::MatrixXd z = (batch.actions - mean).array().colwise() / sigma.array();
  const Eigen::RowVectorXd log_prob =
      (-0.5 * z.array().square()).colwise().sum() - (params.log_std.sum() + 0.5 * kActionDim * kLogTwoPi);

  Eigen::RowVectorXd dloss_dlogp(n);
  double surrogate = 0.0;
  int clipped_count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ratio = std::exp(log_prob(i) - batch.old_log_probs(i));
    const double adv = batch.advantages(i);
    surrogate += clipped_surrogate(ratio, adv, eps);
    // The clipped branch is the minimum (and flat) only on the side where the
    // ratio moves in the advantage's favour.
    const bool clipped = adv >= 0.0 ? ratio > 1.0 + eps : ratio < 1.0 - eps;
    if (clipped) ++clipped_count;
    dloss_dlogp(i) = clipped ? 0.0 : -adv * ratio * inv_n;
  }

  const Eigen::RowVectorXd value_err = value - batch.returns.transpose();
  LossResult out;
  out.policy_loss = -surrogate * inv_n;
  out.value_loss = value_err.squaredNorm() * inv_n;
  std::vector<double> log_std(params.log_std.data(), params.log_std.data() + params.log_std.size());
  out.entropy = gaussian_entropy(log_std);
  out.loss = out.policy_loss + cfg.value_coeff * out.value_loss - cfg.entropy_coeff * out.entropy;
  out.clip_fraction = static_cast<double>(clipped_count) * inv_n;

  if (!std::isfinite(out.loss)) {
    std::ostringstream msg;
    msg << "ppo_loss: non-finite loss (policy " << out.policy_loss << ", value " << out.value_loss << ", entropy "
        << out.entropy << ") on a batch of " << n << "; max |advantage| " << batch.advantages.cwiseAbs().maxCoeff()
        << ", max |return| " << batch.returns.cwiseAbs().maxCoeff() << ", log_std [" << params.log_std.transpose()
        << "]";
    throw NumericalError(msg.str());
  }

  // Backward.
  const Eigen::MatrixXd g_mean = (z.array().colwise() / sigma.array()).rowwise() * dloss_dlogp.array();
  const Eigen::RowVectorXd g_value = (2.0 * cfg.value_coeff * inv_n) * value_err;
  Eigen::VectorXd g_log_std =
      ((z.array().square() - 1.0).rowwise() * dloss_dlogp.array()).rowwise().sum().matrix();
  g_log_std.array() -= cfg.entropy_coeff;

  PolicyParameters grad = PolicyParameters::zeros(params.obs_dim(), params.hidden_units(), params.num_layers());
  grad.mean_head.weight = g_mean * top.transpose();
  grad.mean_head.bias = g_mean.rowwise().sum();
  grad.value_head.weight = g_value * top.transpose();
  grad.value_head.bias(0) = g_value.sum();
  grad.log_std = g_log_std;

  Eigen::MatrixXd g_h = params.mean_head.weight.transpose() * g_mean + params.value_head.weight.transpose() * g_value;
  for (std::size_t k = params.trunk.size(); k-- > 0;) {
    const Eigen::MatrixXd g_pre = g_h.array() * (1.0 - acts[k + 1].array().square());
    grad.trunk[k].weight = g_pre * acts[k].transpose();
    grad.trunk[k].bias = g_pre.rowwise().sum();
    if (k > 0) g_h = params.trunk[k].weight.transpose() * g_pre;
  }
  out.gradient = grad.flatten();
  return out;
}

void AdamState::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr, double epsilon) {
  if (m.size() != params.size()) {
    m = Eigen::VectorXd::Zero(params.size());
    v = Eigen::VectorXd::Zero(params.size());
    t = 0;
  }
  ++t;
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  params.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + epsilon);
}

double learning_rate_at(const PPOConfig& cfg, std::int64_t step) {
  if (!cfg.linear_lr_decay) return cfg.learning_rate;
  const double frac = static_cast<double>(step) / static_cast<double>(cfg.max_steps);
  return cfg.learning_rate * std::max(0.0, 1.0 - frac);
}

void normalize_advantages(Eigen::VectorXd& adv) {
  if (adv.size() == 0) return;
  const double mean = adv.mean();
  adv.array() -= mean;
  const double sd = std::sqrt(adv.squaredNorm() / static_cast<double>(adv.size()));
  if (sd > 1e-12) adv /= sd;
}

void shuffle_indices(std::vector<Eigen::Index>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
}

PolicyParameters update(const PolicyParameters& params, const TransitionBatch& batch, const PPOConfig& cfg,
                        std::int64_t step, AdamState& adam, Rng& rng) {
  TransitionBatch data = batch;
  if (cfg.normalize_advantages) normalize_advantages(data.advantages);

  const double lr = learning_rate_at(cfg, step);
  const Eigen::Index n = data.size();
  const Eigen::Index mb = std::min<Eigen::Index>(cfg.batch_size, n);
  const Eigen::Index n_minibatches = n / mb;

  PolicyParameters current = params;
  Eigen::VectorXd flat = current.flatten();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

  for (int epoch = 0; epoch < cfg.num_epoch; ++epoch) {
    shuffle_indices(order, rng);
    for (Eigen::Index b = 0; b < n_minibatches; ++b) {
      const std::span<const Eigen::Index> slice(order.data() + b * mb, static_cast<std::size_t>(mb));
      const LossResult r = ppo_loss(data.select(slice), current, cfg);
      adam.step(flat, r.gradient, lr, cfg.adam_epsilon);
      current.assign(flat);
    }
  }
  return current;
}

}  // namespace swarm
