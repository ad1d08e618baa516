#pragma once

#include <span>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/world.hpp"

namespace swarm {

// Agents within `radius` of the given agent (inclusive), excluding itself, in id order.
std::vector<AgentState> neighbors_within(std::span<const AgentState> agents, const AgentState& self, double radius);

// Offset from the agent to its neighbourhood centroid. Zero with no neighbours.
Vec2 cohesion_vector(const AgentState& agent, std::span<const AgentState> neighbors);

// Mean forward vector of the neighbours. Zero with no neighbours.
Vec2 alignment_vector(const AgentState& agent, std::span<const AgentState> neighbors);

// Mean of (agent.pos - neighbour.pos) over the close neighbours. Zero with none.
Vec2 avoidance_vector(const AgentState& agent, std::span<const AgentState> close_neighbors);

// Weighted steering direction before normalization; each component is reduced
// to a unit vector (or zero) first so the weights set the mix.
Vec2 boid_steering(const WorldState& state, int agent_id, const BoidConfig& cfg);

// Full-throttle, rate-limited turn toward the steering direction.
AgentAction boid_action(const WorldState& state, int agent_id, const BoidConfig& cfg);

std::vector<AgentAction> boid_actions(const WorldState& state, const BoidConfig& cfg);

}  // namespace swarm
