#include "swarm/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "swarm/errors.hpp"

namespace swarm {

std::string_view to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::Foraging:
      return "foraging";
    case RewardKind::Caught:
      return "caught";
    case RewardKind::WallCollision:
      return "wall_collision";
  }
  return "unknown";
}

double reward_value(RewardKind kind) {
  switch (kind) {
    case RewardKind::Foraging:
      return kForagingReward;
    case RewardKind::Caught:
      return kCaughtReward;
    case RewardKind::WallCollision:
      return kWallCollisionReward;
  }
  return 0.0;
}

RewardEvent make_event(int agent_id, RewardKind kind) { return {agent_id, kind, reward_value(kind)}; }

const AgentState& WorldState::agent(int id) const {
  if (id < 0 || id >= static_cast<int>(agents.size())) throw LookupError("unknown agent id " + std::to_string(id));
  return agents[static_cast<std::size_t>(id)];
}

namespace {

constexpr int kPlacementAttempts = 10'000;
constexpr int kMaxCollisionIterations = 10'000;
constexpr double kContactSlop = 1e-10;
constexpr double kContactTolerance = 1e-9;

Vec2 random_point(Rng& rng, const ArenaSpec& arena, double margin) {
  const double x = rng.uniform(margin, arena.width - margin);
  const double y = rng.uniform(margin, arena.height - margin);
  return {x, y};
}

Vec2 random_heading(Rng& rng) { return unit_from_angle(rng.uniform(-std::numbers::pi, std::numbers::pi)); }

bool clear_of_agents(Vec2 p, double clearance, std::span<const AgentState> agents, int skip_id = -1) {
  return std::all_of(agents.begin(), agents.end(), [&](const AgentState& a) {
    return a.id == skip_id || distance(p, a.position) >= clearance + a.radius;
  });
}

// Rejection-samples a point satisfying `ok`; std::nullopt when the arena is too crowded.
template <typename Pred>
std::optional<Vec2> sample_where(Rng& rng, const ArenaSpec& arena, double margin, Pred ok) {
  for (int i = 0; i < kPlacementAttempts; ++i) {
    const Vec2 p = random_point(rng, arena, margin);
    if (ok(p)) return p;
  }
  return std::nullopt;
}

void respawn_agent(WorldState& s, AgentState& a) {
  const auto& pred = s.predator;
  const bool hunt = s.config.predator.enabled;
  auto free = [&](Vec2 p) { return clear_of_agents(p, a.radius, s.agents, a.id); };
  // Prefer a spot outside the predator's view; fall back to any free spot.
  auto p = sample_where(s.rng, s.arena, a.radius, [&](Vec2 q) {
    return free(q) && (!hunt || distance(q, pred.position) > pred.vision_radius);
  });
  if (!p) p = sample_where(s.rng, s.arena, a.radius, [&](Vec2 q) {
      return free(q) && (!hunt || distance(q, pred.position) > pred.catch_radius);
    });
  if (!p) p = random_point(s.rng, s.arena, a.radius);
  a.position = *p;
  a.heading = random_heading(s.rng);
  a.speed = 0.0;
  a.in_wall_contact = false;
}

void respawn_food(WorldState& s, FoodItem& f) {
  auto p = sample_where(s.rng, s.arena, f.radius,
                        [&](Vec2 q) { return clear_of_agents(q, f.radius, s.agents); });
  f.position = p ? *p : random_point(s.rng, s.arena, f.radius);
}

bool touches_wall(const AgentState& a, const ArenaSpec& arena) {
  const double r = a.radius + kContactTolerance;
  const Vec2 p = a.position;
  return p.x <= r || p.y <= r || p.x >= arena.width - r || p.y >= arena.height - r;
}

}  // namespace

WorldState init_world(const WorldConfig& config, std::uint64_t seed) {
  validate(config);
  WorldState s;
  s.config = config;
  s.arena = ArenaSpec{config.width, config.height};
  s.rng = Rng(seed);

  s.agents.reserve(static_cast<std::size_t>(config.n_agents));
  for (int id = 0; id < config.n_agents; ++id) {
    const double r = config.agent_radius;
    auto p = sample_where(s.rng, s.arena, r, [&](Vec2 q) { return clear_of_agents(q, r, s.agents); });
    if (!p) throw ConfigError("arena too crowded to place " + std::to_string(config.n_agents) + " agents");
    AgentState a;
    a.id = id;
    a.position = *p;
    a.heading = random_heading(s.rng);
    a.radius = r;
    s.agents.push_back(a);
  }

  const auto& pc = config.predator;
  auto pp = sample_where(s.rng, s.arena, pc.radius, [&](Vec2 q) {
    return clear_of_agents(q, std::max(pc.radius, pc.catch_radius), s.agents);
  });
  if (!pp) throw ConfigError("no room to place the predator");
  s.predator = make_predator(pc, *pp, random_heading(s.rng));

  s.food.reserve(static_cast<std::size_t>(config.n_food));
  for (int i = 0; i < config.n_food; ++i) {
    FoodItem f;
    f.radius = config.food_radius;
    auto p = sample_where(s.rng, s.arena, f.radius, [&](Vec2 q) { return clear_of_agents(q, f.radius, s.agents); });
    if (!p) throw ConfigError("no room to place food");
    f.position = *p;
    s.food.push_back(f);
  }
  return s;
}

AgentState apply_action(const AgentState& agent, AgentAction action, const Kinematics& kin, double dt) {
  const AgentAction a = action.clamped();
  AgentState out = agent;
  out.heading = agent.heading.rotated(a.turn_rate * deg_to_rad(kin.max_turn_deg) * dt).normalized();
  out.speed = a.throttle * kin.max_speed;
  out.position = agent.position + out.heading * (out.speed * dt);
  return out;
}

double max_overlap(std::span<const AgentState> agents) {
  double worst = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i)
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      const double depth = agents[i].radius + agents[j].radius - distance(agents[i].position, agents[j].position);
      worst = std::max(worst, depth);
    }
  return worst;
}

CollisionReport resolve_collisions(WorldState& state) {
  auto& agents = state.agents;
  const ArenaSpec& arena = state.arena;
  std::vector<char> crossed(agents.size(), 0);
  CollisionReport report;

  auto clamp_all = [&] {
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const Vec2 clamped = arena.clamp(agents[i].position, agents[i].radius);
      if (clamped != agents[i].position) {
        crossed[i] = 1;
        agents[i].position = clamped;
      }
    }
  };

  clamp_all();
  for (int iter = 0; iter < kMaxCollisionIterations; ++iter) {
    bool pushed = false;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      for (std::size_t j = i + 1; j < agents.size(); ++j) {
        Vec2 delta = agents[j].position - agents[i].position;
        const double min_d = agents[i].radius + agents[j].radius;
        const double d = delta.norm();
        if (d >= min_d - kContactSlop) continue;
        // Coincident centres get a fixed, id-dependent separation axis.
        const Vec2 n = d > 0.0 ? delta / d : unit_from_angle(2.399963229728653 * static_cast<double>(i + j));
        // A little extra so rounding cannot leave the pair a hair inside contact.
        const double half = 0.5 * (min_d - d + kContactSlop);
        agents[i].position -= n * half;
        agents[j].position += n * half;
        pushed = true;
      }
    }
    clamp_all();
    report.iterations = iter + 1;
    if (!pushed) break;
  }

  for (std::size_t i = 0; i < agents.size(); ++i)
    if (crossed[i] || touches_wall(agents[i], arena)) report.wall_contacts.push_back(agents[i].id);
  return report;
}

std::vector<RewardEvent> step_world(WorldState& state, std::span<const AgentAction> actions) {
  if (actions.size() != state.agents.size())
    throw ContractViolation("step_world: got " + std::to_string(actions.size()) + " actions for " +
                            std::to_string(state.agents.size()) + " agents");

  const auto& cfg = state.config;
  const double dt = cfg.dt;
  const Kinematics kin{cfg.prey_max_speed(), cfg.max_turn_deg};

  std::vector<Vec2> before(state.agents.size());
  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    before[i] = state.agents[i].position;
    state.agents[i] = apply_action(state.agents[i], actions[i], kin, dt);
  }

  if (cfg.predator.enabled) step_predator(state.predator, state.agents, state.arena, dt, state.rng);

  const CollisionReport collisions = resolve_collisions(state);

  // Blocked movement shows up as a lower speed.
  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    auto& a = state.agents[i];
    const double along = (a.position - before[i]).dot(a.heading) / dt;
    a.speed = std::clamp(along, 0.0, a.speed);
  }

  std::vector<RewardEvent> events;
  std::vector<char> caught(state.agents.size(), 0);

  if (cfg.predator.enabled) {
    for (int id : check_catch(state.predator, state.agents)) {
      events.push_back(make_event(id, RewardKind::Caught));
      caught[static_cast<std::size_t>(id)] = 1;
      forget(state.predator, id);
      respawn_agent(state, state.agents[static_cast<std::size_t>(id)]);
    }
  }

  for (auto& a : state.agents) {
    if (caught[static_cast<std::size_t>(a.id)]) continue;
    for (auto& f : state.food) {
      if (distance(a.position, f.position) <= a.radius + f.radius) {
        events.push_back(make_event(a.id, RewardKind::Foraging));
        respawn_food(state, f);
        break;  // at most one item per agent per tick
      }
    }
  }

  std::vector<char> contact(state.agents.size(), 0);
  for (int id : collisions.wall_contacts) contact[static_cast<std::size_t>(id)] = 1;
  for (auto& a : state.agents) {
    const auto i = static_cast<std::size_t>(a.id);
    if (caught[i]) continue;
    if (contact[i] && !a.in_wall_contact) events.push_back(make_event(a.id, RewardKind::WallCollision));
    a.in_wall_contact = contact[i];
  }

  ++state.tick;
  return events;
}

}  // namespace swarm
