#include "swarm/metrics.hpp"

#include <limits>
#include <string>

#include "swarm/boids.hpp"
#include "swarm/errors.hpp"

namespace swarm {

namespace {

std::optional<double> heading_error(const AgentState& agent, Vec2 ideal) {
  if (ideal.norm_sq() == 0.0) return std::nullopt;
  return angle_between_deg(agent.heading, ideal);
}

struct Accumulator {
  double sum = 0.0;
  int n = 0;

  void add(std::optional<double> v) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / n;
  }
};

}  // namespace

std::optional<double> alignment_error(const AgentState& agent, std::span<const AgentState> neighbors) {
  if (neighbors.empty()) return std::nullopt;
  return heading_error(agent, alignment_vector(agent, neighbors));
}

std::optional<double> cohesion_error(const AgentState& agent, std::span<const AgentState> neighbors) {
  if (neighbors.empty()) return std::nullopt;
  return heading_error(agent, cohesion_vector(agent, neighbors));
}

std::optional<double> neighbor_avoidance_error(const AgentState& agent, std::span<const AgentState> close_neighbors) {
  if (close_neighbors.empty()) return std::nullopt;
  return heading_error(agent, avoidance_vector(agent, close_neighbors));
}

std::optional<double> predator_avoidance_error(const AgentState& agent, Vec2 predator_position) {
  return heading_error(agent, agent.position - predator_position);
}

std::optional<double> foraging_error(const AgentState& agent, std::span<const FoodItem> food) {
  const FoodItem* nearest = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : food) {
    const double d = distance(agent.position, f.position);
    if (d < best) {
      best = d;
      nearest = &f;
    }
  }
  if (!nearest) return std::nullopt;
  return heading_error(agent, nearest->position - agent.position);
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::Alignment:
      return "alignment_err";
    case Metric::Cohesion:
      return "cohesion_err";
    case Metric::NeighborAvoidance:
      return "neighbor_avoid_err";
    case Metric::PredatorAvoidance:
      return "predator_avoid_err";
    case Metric::Foraging:
      return "foraging_err";
    case Metric::GroupingDistance:
      return "grouping_dist";
    case Metric::PredatorDistance:
      return "predator_dist";
    case Metric::NeighborCount:
      return "neighbor_count";
    case Metric::PredatorAvoidanceGlobal:
      return "predator_avoid_err_global";
  }
  return "unknown";
}

MetricsRecord compute_metrics(const WorldState& state, const MetricsConfig& cfg) {
  std::array<Accumulator, kMetricCount> acc;
  auto at = [&](Metric m) -> Accumulator& { return acc[static_cast<std::size_t>(m)]; };
  const bool hunt = state.config.predator.enabled;
  const Vec2 pred = state.predator.position;

  for (const auto& a : state.agents) {
    const auto near = neighbors_within(state.agents, a, cfg.vision_radius);
    const auto close = neighbors_within(state.agents, a, cfg.avoid_radius);
    at(Metric::Alignment).add(alignment_error(a, near));
    at(Metric::Cohesion).add(cohesion_error(a, near));
    at(Metric::NeighborAvoidance).add(neighbor_avoidance_error(a, close));
    at(Metric::Foraging).add(foraging_error(a, state.food));
    at(Metric::NeighborCount).add(static_cast<double>(near.size()));
    if (!near.empty()) at(Metric::GroupingDistance).add(cohesion_vector(a, near).norm());
    if (hunt) {
      const double d = distance(a.position, pred);
      at(Metric::PredatorDistance).add(d);
      const auto err = predator_avoidance_error(a, pred);
      at(Metric::PredatorAvoidanceGlobal).add(err);
      if (d <= cfg.predator_visibility_radius) at(Metric::PredatorAvoidance).add(err);
    }
  }

  MetricsRecord r;
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    r.values[i] = acc[i].mean();
    r.samples[i] = acc[i].n;
  }
  return r;
}

GroupingStats grouping_stats(const WorldState& state, const MetricsConfig& cfg) {
  const MetricsRecord r = compute_metrics(state, cfg);
  return {r[Metric::GroupingDistance], r[Metric::NeighborCount].value_or(0.0), r[Metric::PredatorDistance]};
}

Aggregator::Aggregator(AggregationConfig cfg) : cfg_(cfg) {
  if (cfg_.n_recordings < 1 || cfg_.frames_between < 1)
    throw ContractViolation("Aggregator: n_recordings and frames_between must be >= 1");
}

bool Aggregator::wants(std::int64_t tick) const {
  return !complete() && tick > 0 && tick % cfg_.frames_between == 0 &&
         tick / cfg_.frames_between == snapshots_ + 1;
}

void Aggregator::add(std::int64_t tick, const MetricsRecord& snapshot) {
  if (!wants(tick))
    throw ContractViolation("Aggregator: unexpected snapshot at tick " + std::to_string(tick));
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (snapshot.values[i]) {
      sums_[i] += *snapshot.values[i];
      ++defined_[i];
    }
    samples_[i] += snapshot.samples[i];
  }
  ++snapshots_;
}

MetricsRecord Aggregator::summary() const {
  MetricsRecord r;
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (defined_[i] > 0) r.values[i] = sums_[i] / defined_[i];
    r.samples[i] = samples_[i];
  }
  return r;
}

MetricsRecord aggregate(std::span<const MetricsRecord> run, const AggregationConfig& cfg) {
  const auto needed = static_cast<std::size_t>(cfg.n_recordings) * static_cast<std::size_t>(cfg.frames_between);
  if (run.size() < needed)
    throw ContractViolation("aggregate: run of " + std::to_string(run.size()) + " ticks is shorter than " +
                            std::to_string(needed));
  Aggregator agg(cfg);
  for (std::size_t t = 1; t <= run.size() && !agg.complete(); ++t)
    if (agg.wants(static_cast<std::int64_t>(t))) agg.add(static_cast<std::int64_t>(t), run[t - 1]);
  return agg.summary();
}

std::vector<PredatorStats> predator_stats(std::span<const PredatorTick> run, int window) {
  if (window < 1) throw ContractViolation("predator_stats: window must be >= 1");
  std::vector<PredatorStats> out;
  const auto w = static_cast<std::size_t>(window);
  const std::size_t full = run.size() / w;
  auto summarize = [&](std::size_t begin, std::size_t end) {
    PredatorStats s;
    s.window_start = run[begin].tick;
    s.window_end = run[end - 1].tick;
    double memory = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      s.catch_count += run[i].catches;
      memory += run[i].memory_size;
    }
    s.mean_memory_size = memory / static_cast<double>(end - begin);
    out.push_back(s);
  };
  for (std::size_t k = 0; k < full; ++k) summarize(k * w, (k + 1) * w);
  if (full == 0 && !run.empty()) summarize(0, run.size());
  return out;
}

}  // namespace swarm
