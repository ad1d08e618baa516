#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "swarm/rng.hpp"

namespace swarm {

inline constexpr int kActionDim = 2;

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out

  bool operator==(const DenseLayer& o) const { return weight == o.weight && bias == o.bias; }
};

/// Shared-trunk actor-critic: tanh hidden layers, a linear action-mean head,
/// a linear value head and a state-independent log standard deviation.
struct PolicyParameters {
  std::vector<DenseLayer> trunk;
  DenseLayer mean_head;   // kActionDim x hidden
  DenseLayer value_head;  // 1 x hidden
  Eigen::VectorXd log_std = Eigen::VectorXd::Zero(kActionDim);

  static PolicyParameters zeros(int obs_dim, int hidden_units, int num_layers);
  // Glorot-uniform trunk; small mean head so initial actions are near zero.
  static PolicyParameters random(int obs_dim, int hidden_units, int num_layers, Rng& rng, double init_log_std = 0.0);

  int obs_dim() const { return static_cast<int>(trunk.front().weight.cols()); }
  int hidden_units() const { return static_cast<int>(trunk.front().weight.rows()); }
  int num_layers() const { return static_cast<int>(trunk.size()); }

  // Scalar count and a flat view in a fixed order: trunk layers (row-major
  // weight, then bias), mean head, value head, log_std.
  std::size_t size() const;
  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);
  bool all_finite() const;

  bool operator==(const PolicyParameters&) const = default;
};

struct PolicyOutput {
  std::array<double, kActionDim> mean{};
  std::array<double, kActionDim> log_std{};
  double value = 0.0;

  bool operator==(const PolicyOutput&) const = default;
};

// Throws ContractViolation when obs.size() != params.obs_dim().
PolicyOutput forward(const PolicyParameters& params, std::span<const double> obs);

struct BatchOutput {
  Eigen::MatrixXd mean;   // kActionDim x N
  Eigen::RowVectorXd value;  // N
};

// Column-per-sample evaluation.
BatchOutput forward_batch(const PolicyParameters& params, const Eigen::MatrixXd& observations);

}  // namespace swarm
