#include "swarm/types.hpp"

#include <algorithm>

namespace swarm {

Vec2 ArenaSpec::clamp(Vec2 p, double margin) const {
  return {std::clamp(p.x, margin, width - margin), std::clamp(p.y, margin, height - margin)};
}

AgentAction AgentAction::clamped() const {
  auto finite_or_zero = [](double v) { return std::isfinite(v) ? v : 0.0; };
  return {std::clamp(finite_or_zero(turn_rate), -1.0, 1.0), std::clamp(finite_or_zero(throttle), 0.0, 1.0)};
}

}  // namespace swarm
