#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "../common/oracles.hpp"
#include "../common/ppo_fixtures.hpp"
#include "swarm/errors.hpp"
#include "swarm/ppo.hpp"

using namespace swarm;

TEST(Gaussian, LogProbAtMean) {
  const std::array<double, 2> mean{0.3, -0.7};
  const std::array<double, 2> log_std{-0.5, 0.2};
  EXPECT_NEAR(gaussian_log_prob(mean, mean, log_std), 0.5 - 0.2 - std::log(2.0 * std::numbers::pi), 1e-12);
}

TEST(Gaussian, LogProbMatchesDensity) {
  const std::array<double, 2> mean{0.0, 1.0};
  const std::array<double, 2> log_std{std::log(2.0), 0.0};
  const std::array<double, 2> x{1.0, -1.0};
  auto pdf = [](double v, double m, double s) {
    return std::exp(-0.5 * (v - m) * (v - m) / (s * s)) / (s * std::sqrt(2.0 * std::numbers::pi));
  };
  EXPECT_NEAR(gaussian_log_prob(x, mean, log_std), std::log(pdf(1.0, 0.0, 2.0) * pdf(-1.0, 1.0, 1.0)), 1e-12);
}

TEST(Gaussian, Entropy) {
  const std::array<double, 2> log_std{0.0, 0.0};
  EXPECT_NEAR(gaussian_entropy(log_std), 1.0 + std::log(2.0 * std::numbers::pi), 1e-12);
}

TEST(Gaussian, DegenerateSampleIsTheMean) {
  Rng rng(1);
  const std::array<double, 2> mean{0.25, -0.4};
  const std::array<double, 2> log_std{-std::numeric_limits<double>::infinity(), -800.0};
  const SampledAction a = sample_action(mean, log_std, rng);
  EXPECT_EQ(a.raw[0], mean[0]);
  EXPECT_EQ(a.raw[1], mean[1]);
}

TEST(Gaussian, MonteCarloMean) {
  Rng rng(2);
  const std::array<double, 2> mean{0.4, -1.5};
  const std::array<double, 2> log_std{std::log(0.7), std::log(1.3)};
  constexpr int n = 100'000;
  double s0 = 0.0, s1 = 0.0;
  for (int i = 0; i < n; ++i) {
    const SampledAction a = sample_action(mean, log_std, rng);
    s0 += a.raw[0];
    s1 += a.raw[1];
  }
  EXPECT_LE(std::abs(s0 / n - mean[0]), 3.0 * 0.7 / std::sqrt(n));
  EXPECT_LE(std::abs(s1 / n - mean[1]), 3.0 * 1.3 / std::sqrt(n));
}

TEST(Gaussian, SampleLogProbIsConsistent) {
  Rng rng(3);
  const std::array<double, 2> mean{0.1, 0.2};
  const std::array<double, 2> log_std{-0.3, 0.4};
  const SampledAction a = sample_action(mean, log_std, rng);
  EXPECT_NEAR(a.log_prob, gaussian_log_prob(a.raw, mean, log_std), 1e-12);
}

TEST(ActionMapping, ClampsIntoRange) {
  EXPECT_EQ(to_agent_action(std::array<double, 2>{0.0, 0.0}), (AgentAction{0.0, 0.5}));
  EXPECT_EQ(to_agent_action(std::array<double, 2>{-3.0, 5.0}), (AgentAction{-1.0, 1.0}));
  EXPECT_EQ(to_agent_action(std::array<double, 2>{0.5, -2.0}), (AgentAction{0.5, 0.0}));
}

TEST(DiscountedReturn, Examples) {
  EXPECT_DOUBLE_EQ(discounted_return(std::vector<double>{1.0, 1.0, 1.0}, 0.5), 1.75);
  EXPECT_EQ(discounted_return(std::vector<double>{}, 0.9), 0.0);
  const std::vector<double> r{0.5, -1.0, 0.5};
  double loop = 0.0, g = 1.0;
  for (double x : r) {
    loop += g * x;
    g *= 0.99;
  }
  EXPECT_NEAR(discounted_return(r, 0.99), loop, 1e-15);
}

TEST(Gae, SingleTerminalStep) {
  const GaeResult g = compute_gae(std::vector<double>{1.0}, std::vector<double>{0.0, 0.0},
                                  std::vector<std::uint8_t>{1}, 0.99, 0.95);
  EXPECT_EQ(g.advantages, std::vector<double>{1.0});
  EXPECT_EQ(g.returns, std::vector<double>{1.0});
}

TEST(Gae, LambdaZeroIsOneStepTd) {
  const std::vector<double> r{0.3, -0.2, 1.0, 0.0};
  const std::vector<double> v{0.1, 0.4, -0.3, 0.2, 0.9};
  const std::vector<std::uint8_t> d{0, 0, 0, 0};
  const GaeResult g = compute_gae(r, v, d, 0.9, 0.0);
  for (std::size_t t = 0; t < r.size(); ++t) EXPECT_NEAR(g.advantages[t], r[t] + 0.9 * v[t + 1] - v[t], 1e-15);
}

TEST(Gae, WorkedExample) {
  const GaeResult g = compute_gae(std::vector<double>{1.0, 0.0}, std::vector<double>{0.5, 0.2, 0.0},
                                  std::vector<std::uint8_t>{0, 1}, 0.99, 0.95);
  EXPECT_NEAR(g.advantages[0], 0.5099, 1e-12);
  EXPECT_NEAR(g.advantages[1], -0.2, 1e-12);
  EXPECT_NEAR(g.returns[0], 1.0099, 1e-12);
}

TEST(Gae, MatchesForwardSumOracle) {
  Rng rng(4);
  for (int ep = 0; ep < 300; ++ep) {
    const std::size_t n = 1 + rng.below(60);
    std::vector<double> r(n), v(n + 1);
    std::vector<std::uint8_t> d(n);
    for (auto& x : r) x = rng.uniform(-1.0, 1.0);
    for (auto& x : v) x = rng.uniform(-2.0, 2.0);
    for (auto& x : d) x = rng.uniform() < 0.05;
    const double gamma = rng.uniform(0.5, 1.0), lambda = rng.uniform(0.0, 1.0);
    const auto want = oracle::gae_forward(r, v, d, gamma, lambda);
    const GaeResult got = compute_gae(r, v, d, gamma, lambda);
    for (std::size_t t = 0; t < n; ++t) {
      ASSERT_NEAR(got.advantages[t], want[t], 1e-10);
      ASSERT_NEAR(got.returns[t], want[t] + v[t], 1e-10);
    }
  }
}

TEST(Gae, LengthMismatchThrows) {
  EXPECT_THROW(compute_gae(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 0.0},
                           std::vector<std::uint8_t>{0, 0}, 0.99, 0.95),
               ContractViolation);
  EXPECT_THROW(compute_gae(std::vector<double>{1.0}, std::vector<double>{0.0, 0.0},
                           std::vector<std::uint8_t>{0, 0}, 0.99, 0.95),
               ContractViolation);
}

TEST(Surrogate, ClipBindsAboveRange) {
  EXPECT_DOUBLE_EQ(clipped_surrogate(1.5, 1.0, 0.2), 1.2);
  EXPECT_DOUBLE_EQ(clipped_surrogate(0.5, -1.0, 0.2), -0.8);
  EXPECT_DOUBLE_EQ(clipped_surrogate(1.5, -1.0, 0.2), -1.5);
  EXPECT_DOUBLE_EQ(clipped_surrogate(1.1, 2.0, 0.2), 2.2);
}

TEST(Surrogate, PessimisticBound) {
  Rng rng(5);
  for (int i = 0; i < 10'000; ++i) {
    const double r = rng.uniform(0.0, 3.0), a = rng.uniform(-2.0, 2.0), eps = rng.uniform(0.05, 0.4);
    ASSERT_LE(clipped_surrogate(r, a, eps), r * a + 1e-15);
  }
}

TEST(PpoLoss, UnitRatioPolicyTermIsMinusMeanAdvantage) {
  Rng rng(6);
  const PolicyParameters p = PolicyParameters::random(6, 8, 2, rng, -0.3);
  TransitionBatch b = fixtures::random_batch(p, 32, rng);
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const PolicyOutput out = forward(p, std::span<const double>(b.observations.col(i).data(), 6));
    b.old_log_probs(i) = gaussian_log_prob(std::array<double, 2>{b.actions(0, i), b.actions(1, i)}, out.mean,
                                           out.log_std);
  }
  const LossResult l = ppo_loss(b, p, PPOConfig{});
  EXPECT_NEAR(l.policy_loss, -b.advantages.mean(), 1e-12);
  EXPECT_EQ(l.clip_fraction, 0.0);
}

TEST(PpoLoss, GradientMatchesFiniteDifferences) {
  Rng rng(7);
  PPOConfig cfg;
  for (int trial = 0; trial < 5; ++trial) {
    const int obs_dim = 2 + static_cast<int>(rng.below(15));
    const PolicyParameters p = PolicyParameters::random(obs_dim, 6, 2, rng, rng.uniform(-0.5, 0.5));
    const TransitionBatch b = fixtures::random_batch(p, 16, rng);
    EXPECT_LE(fixtures::gradient_rel_error(b, p, cfg), 1e-4) << "trial " << trial;
  }
}

TEST(PpoLoss, NonFiniteInputThrows) {
  Rng rng(8);
  const PolicyParameters p = PolicyParameters::random(4, 4, 1, rng);
  TransitionBatch b = fixtures::random_batch(p, 8, rng);
  b.advantages(3) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ppo_loss(b, p, PPOConfig{}), NumericalError);
}

TEST(LearningRate, LinearDecay) {
  PPOConfig cfg;
  EXPECT_EQ(learning_rate_at(cfg, 0), 3.0e-4);
  EXPECT_EQ(learning_rate_at(cfg, cfg.max_steps), 0.0);
  EXPECT_NEAR(learning_rate_at(cfg, cfg.max_steps / 4), 2.25e-4, 1e-18);
  cfg.linear_lr_decay = false;
  EXPECT_EQ(learning_rate_at(cfg, cfg.max_steps), 3.0e-4);
}

TEST(Update, ZeroAdvantageMovesOnlyLogStd) {
  Rng rng(9);
  const PolicyParameters p = PolicyParameters::random(5, 6, 2, rng);
  TransitionBatch b = fixtures::random_batch(p, 64, rng);
  b.advantages.setZero();
  b.returns = forward_batch(p, b.observations).value.transpose();
  PPOConfig cfg;
  cfg.batch_size = 16;
  AdamState adam;
  const PolicyParameters q = update(p, b, cfg, 0, adam, rng);
  const Eigen::VectorXd before = p.flatten(), after = q.flatten();
  const Eigen::Index n = before.size();
  EXPECT_EQ(before.head(n - 2), after.head(n - 2));
  // The entropy bonus pushes log_std up.
  EXPECT_GT(after(n - 2), before(n - 2));
  EXPECT_GT(after(n - 1), before(n - 1));
}

TEST(Update, DeterministicForSeed) {
  Rng init(10);
  const PolicyParameters p = PolicyParameters::random(5, 6, 2, init);
  Rng data(11);
  const TransitionBatch b = fixtures::random_batch(p, 64, data);
  PPOConfig cfg;
  cfg.batch_size = 16;
  AdamState a1, a2;
  Rng r1(12), r2(12);
  EXPECT_EQ(update(p, b, cfg, 100, a1, r1), update(p, b, cfg, 100, a2, r2));
}

TEST(Update, ReducesLossOnFixedBatch) {
  Rng rng(13);
  const PolicyParameters p = PolicyParameters::random(5, 16, 2, rng);
  const TransitionBatch b = fixtures::random_batch(p, 128, rng);
  PPOConfig cfg;
  cfg.normalize_advantages = false;
  cfg.linear_lr_decay = false;
  cfg.learning_rate = 1e-3;
  cfg.num_epoch = 10;
  AdamState adam;
  const PolicyParameters q = update(p, b, cfg, 0, adam, rng);
  EXPECT_LT(ppo_loss(b, q, cfg).loss, ppo_loss(b, p, cfg).loss);
}

TEST(Shuffle, IsAPermutation) {
  Rng rng(14);
  std::vector<Eigen::Index> idx(50);
  for (Eigen::Index i = 0; i < 50; ++i) idx[static_cast<std::size_t>(i)] = i;
  shuffle_indices(idx, rng);
  auto sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  for (Eigen::Index i = 0; i < 50; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
}

TEST(RolloutBuffer, TerminalSegmentIgnoresBootstrap) {
  RolloutBuffer buf(2);
  std::vector<Transition> seg(2);
  seg[0] = {{0.1, 0.2}, {0.0, 0.0}, -1.0, 1.0, 0.5, false};
  seg[1] = {{0.3, 0.4}, {0.0, 0.0}, -1.0, 0.0, 0.2, true};
  buf.add_segment(seg, 123.0, 0.99, 0.95);
  const TransitionBatch b = buf.to_batch();
  ASSERT_EQ(b.size(), 2);
  EXPECT_NEAR(b.advantages(0), 0.5099, 1e-12);
  EXPECT_NEAR(b.advantages(1), -0.2, 1e-12);
  EXPECT_EQ(b.observations(1, 1), 0.4);
  buf.clear();
  EXPECT_EQ(buf.size(), 0u);
}
