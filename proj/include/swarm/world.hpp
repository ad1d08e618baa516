#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/predator.hpp"
#include "swarm/rng.hpp"
#include "swarm/types.hpp"

namespace swarm {

enum class RewardKind { Foraging, Caught, WallCollision };

std::string_view to_string(RewardKind kind);

// Fixed reward table.
inline constexpr double kForagingReward = 0.5;
inline constexpr double kCaughtReward = -1.0;
inline constexpr double kWallCollisionReward = -0.5;

double reward_value(RewardKind kind);

struct RewardEvent {
  int agent_id = 0;
  RewardKind kind = RewardKind::Foraging;
  double value = 0.0;

  bool operator==(const RewardEvent&) const = default;
};

RewardEvent make_event(int agent_id, RewardKind kind);

struct WorldState {
  std::int64_t tick = 0;
  std::vector<AgentState> agents;  // agents[i].id == i
  PredatorState predator;
  std::vector<FoodItem> food;
  ArenaSpec arena;
  WorldConfig config;
  Rng rng;

  const AgentState& agent(int id) const;
  bool operator==(const WorldState&) const = default;
};

// Throws ConfigError on non-positive dimensions, zero agents/food, or an arena
// too crowded to place everything without overlap.
WorldState init_world(const WorldConfig& config, std::uint64_t seed);

struct Kinematics {
  double max_speed = 2.0;
  double max_turn_deg = 12.0;
};

// Rotate heading by turn_rate * max_turn * dt, set speed = throttle * max_speed,
// advance position by heading * speed * dt. No collision handling.
AgentState apply_action(const AgentState& agent, AgentAction action, const Kinematics& kin, double dt);

struct CollisionReport {
  // Agents whose disc touched or crossed an arena wall this tick, ascending.
  std::vector<int> wall_contacts;
  int iterations = 0;
};

// Pushes overlapping agent discs apart along the line of centres (each by
// half the overlap) and clamps discs back inside the walls, iterating until
// no pair interpenetrates.
CollisionReport resolve_collisions(WorldState& state);

// One tick: actions, predator, collisions, then catches, foraging and wall
// events in that order. Throws ContractViolation if |actions| != |agents|.
std::vector<RewardEvent> step_world(WorldState& state, std::span<const AgentAction> actions);

// Largest pairwise interpenetration depth (0 when all discs are separated).
double max_overlap(std::span<const AgentState> agents);

}  // namespace swarm
