#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/world.hpp"

namespace swarm {

// ---- Per-agent angular errors (degrees, [0, 180]) ---------------------------
// Each compares the agent's heading with the ideal vector for one rule.
// std::nullopt means the rule is undefined for this agent right now.

std::optional<double> alignment_error(const AgentState& agent, std::span<const AgentState> neighbors);
std::optional<double> cohesion_error(const AgentState& agent, std::span<const AgentState> neighbors);
std::optional<double> neighbor_avoidance_error(const AgentState& agent, std::span<const AgentState> close_neighbors);
// Ideal is normalize(agent.pos - predator_pos). Always defined unless coincident.
std::optional<double> predator_avoidance_error(const AgentState& agent, Vec2 predator_position);
// Ideal points at the nearest item (ties to the lowest index).
std::optional<double> foraging_error(const AgentState& agent, std::span<const FoodItem> food);

// ---- Scene-level record -----------------------------------------------------

enum class Metric {
  Alignment,
  Cohesion,
  NeighborAvoidance,
  PredatorAvoidance,        // only when the predator is within visibility range
  Foraging,
  GroupingDistance,
  PredatorDistance,
  NeighborCount,
  PredatorAvoidanceGlobal,  // always sampled
};
inline constexpr std::size_t kMetricCount = 9;

std::string metric_name(Metric m);

// Averages over the agents for which each metric is defined, with the number
// of contributing samples.
struct MetricsRecord {
  std::array<std::optional<double>, kMetricCount> values{};
  std::array<int, kMetricCount> samples{};

  std::optional<double> operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }
  int count(Metric m) const { return samples[static_cast<std::size_t>(m)]; }
};

MetricsRecord compute_metrics(const WorldState& state, const MetricsConfig& cfg);

struct GroupingStats {
  std::optional<double> grouping_dist;
  double neighbor_count = 0.0;
  std::optional<double> predator_dist;
};

// Mean distance to the vision-radius neighbourhood centroid (agents with
// neighbours only), mean neighbour count, mean distance to the predator.
GroupingStats grouping_stats(const WorldState& state, const MetricsConfig& cfg);

// ---- Aggregation ------------------------------------------------------------

// Takes a snapshot every frames_between ticks (ticks frames_between,
// 2 * frames_between, ...) until n_recordings snapshots exist, then reports
// the per-metric mean over the snapshots where the metric was defined.
class Aggregator {
 public:
  explicit Aggregator(AggregationConfig cfg);

  bool wants(std::int64_t tick) const;
  void add(std::int64_t tick, const MetricsRecord& snapshot);
  bool complete() const { return snapshots_ == cfg_.n_recordings; }
  int snapshots() const { return snapshots_; }
  MetricsRecord summary() const;

 private:
  AggregationConfig cfg_;
  int snapshots_ = 0;
  std::array<double, kMetricCount> sums_{};
  std::array<int, kMetricCount> defined_{};
  std::array<int, kMetricCount> samples_{};
};

// run[t - 1] is the record observed at tick t. Throws ContractViolation when
// the run is shorter than n_recordings * frames_between.
MetricsRecord aggregate(std::span<const MetricsRecord> run, const AggregationConfig& cfg);

// ---- Predator statistics ------------------------------------------------

struct PredatorTick {
  std::int64_t tick = 0;
  int catches = 0;
  int memory_size = 0;
};

struct PredatorStats {
  std::int64_t window_start = 0;  // first tick in the window
  std::int64_t window_end = 0;    // last tick in the window
  int catch_count = 0;
  double mean_memory_size = 0.0;
};

// Non-overlapping windows of `window` consecutive entries. A trailing partial
// window is reported only when no full window exists.
std::vector<PredatorStats> predator_stats(std::span<const PredatorTick> run, int window = 10'000);

}  // namespace swarm
