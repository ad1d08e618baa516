#include "swarm/predator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swarm {

PredatorState make_predator(const PredatorConfig& config, Vec2 position, Vec2 heading) {
  PredatorState p;
  p.position = position;
  p.heading = heading.normalized();
  p.speed = config.speed;
  p.radius = config.radius;
  p.vision_radius = config.vision_radius;
  p.catch_radius = config.catch_radius;
  p.max_turn_deg = config.max_turn_deg;
  p.instant_turn = config.instant_turn;
  p.retarget_probability = config.retarget_probability;
  return p;
}

namespace {

bool visible(const PredatorState& pred, const AgentState& a) {
  return distance(pred.position, a.position) <= pred.vision_radius;
}

bool remembered(const PredatorState& pred, int id) {
  return std::find(pred.memory.begin(), pred.memory.end(), id) != pred.memory.end();
}

const AgentState* find_agent(std::span<const AgentState> agents, int id) {
  for (const auto& a : agents)
    if (a.id == id) return &a;
  return nullptr;
}

}  // namespace

void update_memory(PredatorState& pred, std::span<const AgentState> agents) {
  std::vector<int> inside;
  inside.reserve(agents.size());
  for (const auto& a : agents)
    if (visible(pred, a)) inside.push_back(a.id);
  std::sort(inside.begin(), inside.end());

  std::erase_if(pred.memory,
                [&](int id) { return !std::binary_search(inside.begin(), inside.end(), id); });
  for (int id : inside)
    if (!remembered(pred, id)) pred.memory.push_back(id);
}

std::optional<int> closest_agent(Vec2 from, std::span<const AgentState> agents) {
  std::optional<int> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& a : agents) {
    const double d = distance(from, a.position);
    if (d < best_d || (d == best_d && best && a.id < *best)) {
      best_d = d;
      best = a.id;
    }
  }
  return best;
}

TargetDecision select_target(PredatorState& pred, std::span<const AgentState> agents) {
  const auto n_visible = std::count_if(agents.begin(), agents.end(), [&](const auto& a) { return visible(pred, a); });
  if (n_visible < 2) {
    pred.memory.clear();
    if (auto id = closest_agent(pred.position, agents)) return {TargetKind::ChaseClosestGlobal, id};
    return {};
  }
  if (!pred.memory.empty()) return {TargetKind::ChaseLastEntered, pred.memory.back()};
  return {};
}

std::vector<int> check_catch(const PredatorState& pred, std::span<const AgentState> agents) {
  std::vector<int> caught;
  for (const auto& a : agents)
    if (distance(pred.position, a.position) <= pred.catch_radius) caught.push_back(a.id);
  std::sort(caught.begin(), caught.end());
  return caught;
}

void forget(PredatorState& pred, int agent_id) { std::erase(pred.memory, agent_id); }

TargetDecision step_predator(PredatorState& pred, std::span<const AgentState> agents, const ArenaSpec& arena,
                             double dt, Rng& rng) {
  const std::vector<int> before = pred.memory;
  update_memory(pred, agents);
  TargetDecision decision = select_target(pred, agents);

  if (pred.retarget_probability > 0.0 && decision.kind == TargetKind::ChaseLastEntered) {
    // Random-retarget baseline: keep the current target while it stays in
    // view, and switch to each newcomer with a fixed probability.
    std::optional<int> target = pred.target;
    if (!target || !remembered(pred, *target)) target = pred.memory.back();
    for (int id : pred.memory) {
      const bool is_new = std::find(before.begin(), before.end(), id) == before.end();
      if (is_new && rng.uniform() < pred.retarget_probability) target = id;
    }
    decision.target_id = target;
  }
  pred.target = decision.target_id;

  if (decision.target_id) {
    if (const AgentState* t = find_agent(agents, *decision.target_id)) {
      const Vec2 to_target = t->position - pred.position;
      if (to_target.norm_sq() > 0.0) {
        if (pred.instant_turn) {
          pred.heading = to_target.normalized();
        } else {
          const double limit = deg_to_rad(pred.max_turn_deg) * dt;
          const double turn = std::clamp(signed_angle(pred.heading, to_target), -limit, limit);
          pred.heading = pred.heading.rotated(turn).normalized();
        }
      }
    }
  }

  pred.position = arena.clamp(pred.position + pred.heading * (pred.speed * dt), pred.radius);
  return decision;
}

}  // namespace swarm
