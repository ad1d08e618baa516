#pragma once

#include <vector>

#include "swarm/world.hpp"

namespace swarm::testing {

inline AgentState agent_at(int id, Vec2 pos, Vec2 heading = {1.0, 0.0}, double speed = 0.0) {
  AgentState a;
  a.id = id;
  a.position = pos;
  a.heading = heading.normalized();
  a.speed = speed;
  return a;
}

// Hand-built world: no food unless given, predator parked far away and disabled
// unless the caller turns it on.
inline WorldState scene(std::vector<AgentState> agents, std::vector<FoodItem> food = {},
                        WorldConfig cfg = [] {
                          WorldConfig c;
                          c.predator.enabled = false;
                          return c;
                        }()) {
  WorldState s;
  s.config = cfg;
  s.arena = {cfg.width, cfg.height};
  s.agents = std::move(agents);
  s.food = std::move(food);
  s.predator = make_predator(cfg.predator, {cfg.width - 1.0, cfg.height - 1.0}, {1.0, 0.0});
  return s;
}

inline std::vector<AgentState> random_agents(Rng& rng, int n, double lo, double hi) {
  std::vector<AgentState> out;
  for (int i = 0; i < n; ++i)
    out.push_back(agent_at(i, {rng.uniform(lo, hi), rng.uniform(lo, hi)},
                           unit_from_angle(rng.uniform(-3.14159, 3.14159))));
  return out;
}

}  // namespace swarm::testing
