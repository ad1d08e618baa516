#pragma once

#include <cmath>

#include "swarm/vec2.hpp"

namespace swarm {

struct ArenaSpec {
  double width = 50.0;
  double height = 50.0;

  bool contains(Vec2 p) const { return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height; }
  double diagonal() const { return std::hypot(width, height); }
  Vec2 clamp(Vec2 p, double margin = 0.0) const;

  bool operator==(const ArenaSpec&) const = default;
};

struct AgentState {
  int id = 0;
  Vec2 position;
  Vec2 heading{1.0, 0.0};
  double speed = 0.0;
  double radius = 0.5;
  // Wall-contact debounce: true while the disc stays in contact with a wall.
  bool in_wall_contact = false;

  Vec2 velocity() const { return heading * speed; }
  bool operator==(const AgentState&) const = default;
};

struct FoodItem {
  Vec2 position;
  double radius = 0.5;

  bool operator==(const FoodItem&) const = default;
};

// Fraction of the turn limit and of the top speed. Out-of-range inputs are clamped.
struct AgentAction {
  double turn_rate = 0.0;  // [-1, 1], positive turns counter-clockwise (left)
  double throttle = 0.0;   // [0, 1]

  AgentAction clamped() const;
  bool operator==(const AgentAction&) const = default;
};

}  // namespace swarm
