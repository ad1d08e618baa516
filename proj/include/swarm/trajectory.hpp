#pragma once

#include <ostream>
#include <span>

#include <nlohmann/json.hpp>

#include "swarm/world.hpp"

namespace swarm {

// One newline-delimited JSON object per tick: tick, agent poses, predator pose
// and memory, food positions, and the events emitted by that tick.
nlohmann::json trajectory_record(const WorldState& state, std::span<const RewardEvent> events);

class TrajectoryWriter {
 public:
  explicit TrajectoryWriter(std::ostream& out) : out_(out) {}
  void write(const WorldState& state, std::span<const RewardEvent> events);

 private:
  std::ostream& out_;
};

// FNV-1a 64 over the record's serialized bytes, chained from `seed`.
std::uint64_t hash_record(const nlohmann::json& record, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace swarm
