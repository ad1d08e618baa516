#include "swarm/trajectory.hpp"

namespace swarm {

using nlohmann::json;

json trajectory_record(const WorldState& state, std::span<const RewardEvent> events) {
  json agents = json::array();
  for (const auto& a : state.agents)
    agents.push_back({{"id", a.id},
                      {"x", a.position.x},
                      {"y", a.position.y},
                      {"hx", a.heading.x},
                      {"hy", a.heading.y},
                      {"speed", a.speed}});
  json food = json::array();
  for (const auto& f : state.food) food.push_back({f.position.x, f.position.y});
  json evs = json::array();
  for (const auto& e : events)
    evs.push_back({{"agent", e.agent_id}, {"kind", std::string(to_string(e.kind))}, {"value", e.value}});
  const auto& p = state.predator;
  return {{"tick", state.tick},
          {"agents", agents},
          {"predator",
           {{"x", p.position.x},
            {"y", p.position.y},
            {"hx", p.heading.x},
            {"hy", p.heading.y},
            {"memory_size", p.memory.size()},
            {"memory", p.memory}}},
          {"food", food},
          {"events", evs}};
}

void TrajectoryWriter::write(const WorldState& state, std::span<const RewardEvent> events) {
  out_ << trajectory_record(state, events).dump() << '\n';
}

std::uint64_t hash_record(const json& record, std::uint64_t h) {
  for (unsigned char ch : record.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace swarm
