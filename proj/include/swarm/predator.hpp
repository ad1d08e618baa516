#pragma once

#include <optional>
#include <span>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/rng.hpp"
#include "swarm/types.hpp"

namespace swarm {

/// The non-learning predator.
///
/// `memory` holds the ids of prey currently inside the vision radius, in the
/// order they entered it. When two or more prey are visible the predator
/// chases the newest entry, so a prey that slips into a crowd can hand the
/// pursuit over to a neighbour.
struct PredatorState {
  Vec2 position;
  Vec2 heading{1.0, 0.0};
  double speed = 2.5;
  double radius = 0.75;
  double vision_radius = 8.0;
  double catch_radius = 1.0;
  double max_turn_deg = 15.0;
  bool instant_turn = false;
  double retarget_probability = 0.0;
  std::vector<int> memory;
  // Only used by the random-retarget baseline.
  std::optional<int> target;

  Vec2 velocity() const { return heading * speed; }
  bool operator==(const PredatorState&) const = default;
};

PredatorState make_predator(const PredatorConfig& config, Vec2 position, Vec2 heading);

enum class TargetKind { ChaseClosestGlobal, ChaseLastEntered, NoChange };

struct TargetDecision {
  TargetKind kind = TargetKind::NoChange;
  std::optional<int> target_id;

  bool operator==(const TargetDecision&) const = default;
};

// Appends newly visible prey (ascending id for simultaneous entries) and drops
// prey that left the radius, preserving the order of retained entries.
void update_memory(PredatorState& pred, std::span<const AgentState> agents);

// Fewer than two prey visible: memory is cleared and the closest prey in the
// whole arena is chased (ties to the lowest id). Otherwise the last entry of
// memory is chased.
TargetDecision select_target(PredatorState& pred, std::span<const AgentState> agents);

// Nearest agent by Euclidean distance, ties to the lowest id.
std::optional<int> closest_agent(Vec2 from, std::span<const AgentState> agents);

// One predator tick: memory update, target selection, rate-limited turn
// toward the target, advance, clamp into the arena. `rng` is only consumed by
// the random-retarget baseline.
TargetDecision step_predator(PredatorState& pred, std::span<const AgentState> agents, const ArenaSpec& arena,
                             double dt, Rng& rng);

// Ids of agents with distance <= catch_radius (closed boundary), ascending.
std::vector<int> check_catch(const PredatorState& pred, std::span<const AgentState> agents);

// Drop one id from memory (used when a prey is caught and respawned).
void forget(PredatorState& pred, int agent_id);

}  // namespace swarm
