#include "swarm/boids.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swarm {

std::vector<AgentState> neighbors_within(std::span<const AgentState> agents, const AgentState& self, double radius) {
  std::vector<AgentState> out;
  for (const auto& a : agents)
    if (a.id != self.id && distance(a.position, self.position) <= radius) out.push_back(a);
  return out;
}

Vec2 cohesion_vector(const AgentState& agent, std::span<const AgentState> neighbors) {
  if (neighbors.empty()) return {};
  Vec2 sum;
  for (const auto& n : neighbors) sum += n.position;
  return sum / static_cast<double>(neighbors.size()) - agent.position;
}

Vec2 alignment_vector(const AgentState&, std::span<const AgentState> neighbors) {
  if (neighbors.empty()) return {};
  Vec2 sum;
  for (const auto& n : neighbors) sum += n.heading;
  return sum / static_cast<double>(neighbors.size());
}

Vec2 avoidance_vector(const AgentState& agent, std::span<const AgentState> close_neighbors) {
  if (close_neighbors.empty()) return {};
  Vec2 sum;
  for (const auto& n : close_neighbors) sum += agent.position - n.position;
  return sum / static_cast<double>(close_neighbors.size());
}

Vec2 boid_steering(const WorldState& state, int agent_id, const BoidConfig& cfg) {
  const AgentState& self = state.agent(agent_id);
  const auto near = neighbors_within(state.agents, self, cfg.vision_radius);
  const auto close = neighbors_within(state.agents, self, cfg.avoid_radius);
  const auto& w = cfg.weights;

  Vec2 steer = w.cohesion * cohesion_vector(self, near).normalized() +
               w.alignment * alignment_vector(self, near).normalized() +
               w.avoidance * avoidance_vector(self, close).normalized();

  if (state.config.predator.enabled && distance(self.position, state.predator.position) <= cfg.vision_radius)
    steer += w.predator_flee * (self.position - state.predator.position).normalized();

  if (w.food_seek > 0.0 && !state.food.empty()) {
    const FoodItem* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : state.food) {
      const double d = distance(self.position, f.position);
      if (d < best) {
        best = d;
        nearest = &f;
      }
    }
    steer += w.food_seek * (nearest->position - self.position).normalized();
  }
  return steer;
}

AgentAction boid_action(const WorldState& state, int agent_id, const BoidConfig& cfg) {
  const Vec2 steer = boid_steering(state, agent_id, cfg);
  if (steer.norm() < 1e-12) return {0.0, 1.0};
  const double wanted = signed_angle(state.agent(agent_id).heading, steer.normalized());
  const double per_tick = deg_to_rad(state.config.max_turn_deg) * state.config.dt;
  return {std::clamp(wanted / per_tick, -1.0, 1.0), 1.0};
}

std::vector<AgentAction> boid_actions(const WorldState& state, const BoidConfig& cfg) {
  std::vector<AgentAction> out;
  out.reserve(state.agents.size());
  for (const auto& a : state.agents) out.push_back(boid_action(state, a.id, cfg));
  return out;
}

}  // namespace swarm
