#include "swarm/network.hpp"

#include <cmath>
#include <string>

#include "swarm/errors.hpp"

namespace swarm {

namespace {

DenseLayer zero_layer(int out, int in) { return {Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)}; }

void glorot(DenseLayer& layer, Rng& rng, double gain) {
  const double limit = gain * std::sqrt(6.0 / static_cast<double>(layer.weight.rows() + layer.weight.cols()));
  for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = rng.uniform(-limit, limit);
  layer.bias.setZero();
}

// Works for both const and mutable parameters.
template <typename Params, typename Visit>
void for_each_block(Params& p, Visit&& visit) {
  for (auto& l : p.trunk) {
    visit(l.weight);
    visit(l.bias);
  }
  visit(p.mean_head.weight);
  visit(p.mean_head.bias);
  visit(p.value_head.weight);
  visit(p.value_head.bias);
  visit(p.log_std);
}

}  // namespace

PolicyParameters PolicyParameters::zeros(int obs_dim, int hidden_units, int num_layers) {
  PolicyParameters p;
  int in = obs_dim;
  for (int i = 0; i < num_layers; ++i) {
    p.trunk.push_back(zero_layer(hidden_units, in));
    in = hidden_units;
  }
  p.mean_head = zero_layer(kActionDim, hidden_units);
  p.value_head = zero_layer(1, hidden_units);
  p.log_std = Eigen::VectorXd::Zero(kActionDim);
  return p;
}

PolicyParameters PolicyParameters::random(int obs_dim, int hidden_units, int num_layers, Rng& rng,
                                          double init_log_std) {
  PolicyParameters p = zeros(obs_dim, hidden_units, num_layers);
  for (auto& l : p.trunk) glorot(l, rng, 1.0);
  glorot(p.mean_head, rng, 0.01);
  glorot(p.value_head, rng, 1.0);
  p.log_std.setConstant(init_log_std);
  return p;
}

std::size_t PolicyParameters::size() const {
  std::size_t n = 0;
  for_each_block(*this, [&](const auto& block) { n += static_cast<std::size_t>(block.size()); });
  return n;
}

Eigen::VectorXd PolicyParameters::flatten() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(size()));
  Eigen::Index at = 0;
  for_each_block(*this, [&](auto& block) {
    using Block = std::decay_t<decltype(block)>;
    if constexpr (Block::ColsAtCompileTime == 1) {
      flat.segment(at, block.size()) = block;
      at += block.size();
    } else {
      for (Eigen::Index r = 0; r < block.rows(); ++r) {
        flat.segment(at, block.cols()) = block.row(r).transpose();
        at += block.cols();
      }
    }
  });
  return flat;
}

void PolicyParameters::assign(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != size())
    throw ContractViolation("PolicyParameters::assign: expected " + std::to_string(size()) + " values, got " +
                            std::to_string(flat.size()));
  Eigen::Index at = 0;
  for_each_block(*this, [&](auto& block) {
    using Block = std::decay_t<decltype(block)>;
    if constexpr (Block::ColsAtCompileTime == 1) {
      block = flat.segment(at, block.size());
      at += block.size();
    } else {
      for (Eigen::Index r = 0; r < block.rows(); ++r) {
        block.row(r) = flat.segment(at, block.cols()).transpose();
        at += block.cols();
      }
    }
  });
}

bool PolicyParameters::all_finite() const { return flatten().allFinite(); }

BatchOutput forward_batch(const PolicyParameters& params, const Eigen::MatrixXd& observations) {
  if (observations.rows() != params.obs_dim())
    throw ContractViolation("forward: observation width " + std::to_string(observations.rows()) +
                            " does not match network input " + std::to_string(params.obs_dim()));
  Eigen::MatrixXd h = observations;
  for (const auto& l : params.trunk) h = ((l.weight * h).colwise() + l.bias).array().tanh().matrix();
  BatchOutput out;
  out.mean = (params.mean_head.weight * h).colwise() + params.mean_head.bias;
  out.value = (params.value_head.weight * h).array() + params.value_head.bias(0);
  return out;
}

PolicyOutput forward(const PolicyParameters& params, std::span<const double> obs) {
  const Eigen::Map<const Eigen::MatrixXd> x(obs.data(), static_cast<Eigen::Index>(obs.size()), 1);
  const BatchOutput b = forward_batch(params, x);
  PolicyOutput out;
  for (int j = 0; j < kActionDim; ++j) {
    out.mean[static_cast<std::size_t>(j)] = b.mean(j, 0);
    out.log_std[static_cast<std::size_t>(j)] = params.log_std(j);
  }
  out.value = b.value(0);
  return out;
}

}  // namespace swarm
