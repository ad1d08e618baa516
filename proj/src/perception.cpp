#include "swarm/perception.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swarm/errors.hpp"

namespace swarm {

std::string_view to_string(RayTag tag) {
  switch (tag) {
    case RayTag::Agent:
      return "agent";
    case RayTag::Predator:
      return "predator";
    case RayTag::Food:
      return "food";
    case RayTag::Wall:
      return "wall";
    case RayTag::None:
      return "none";
  }
  return "unknown";
}

double ray_bearing(const RaycastConfig& cfg, int k) {
  const double spread = deg_to_rad(cfg.spread_deg);
  if (cfg.n_rays == 1) return 0.0;
  return -0.5 * spread + spread * static_cast<double>(k) / static_cast<double>(cfg.n_rays - 1);
}

namespace {

constexpr double kNoHit = std::numeric_limits<double>::infinity();

// Entry parameter of a unit ray into a disc; 0 if the origin is inside.
double ray_disc(Vec2 origin, Vec2 dir, Vec2 centre, double radius) {
  const Vec2 m = origin - centre;
  const double c = m.norm_sq() - radius * radius;
  if (c <= 0.0) return 0.0;
  const double b = m.dot(dir);
  if (b > 0.0) return kNoHit;  // pointing away
  const double disc = b * b - c;
  if (disc < 0.0) return kNoHit;
  return -b - std::sqrt(disc);
}

double ray_walls(Vec2 origin, Vec2 dir, const ArenaSpec& arena) {
  double t = kNoHit;
  if (dir.x > 0.0) t = std::min(t, (arena.width - origin.x) / dir.x);
  if (dir.x < 0.0) t = std::min(t, -origin.x / dir.x);
  if (dir.y > 0.0) t = std::min(t, (arena.height - origin.y) / dir.y);
  if (dir.y < 0.0) t = std::min(t, -origin.y / dir.y);
  return std::max(t, 0.0);
}

void put_vec(std::vector<double>& out, Vec2 v) {
  out.push_back(v.x);
  out.push_back(v.y);
}

}  // namespace

std::vector<RayHit> cast_rays(const WorldState& state, int agent_id, const RaycastConfig& cfg) {
  const AgentState& self = state.agent(agent_id);
  std::vector<RayHit> hits;
  hits.reserve(static_cast<std::size_t>(cfg.n_rays));

  for (int k = 0; k < cfg.n_rays; ++k) {
    const Vec2 dir = self.heading.rotated(ray_bearing(cfg, k)).normalized();
    double best = kNoHit;
    RayTag tag = RayTag::None;
    auto consider = [&](double t, RayTag what) {
      if (t < best) {
        best = t;
        tag = what;
      }
    };

    for (const auto& other : state.agents)
      if (other.id != agent_id) consider(ray_disc(self.position, dir, other.position, other.radius), RayTag::Agent);
    if (state.config.predator.enabled)
      consider(ray_disc(self.position, dir, state.predator.position, state.predator.radius), RayTag::Predator);
    for (const auto& f : state.food) consider(ray_disc(self.position, dir, f.position, f.radius), RayTag::Food);
    consider(ray_walls(self.position, dir, state.arena), RayTag::Wall);

    if (best <= cfg.range)
      hits.push_back({tag, best / cfg.range});
    else
      hits.push_back({RayTag::None, 1.0});
  }
  return hits;
}

std::size_t observation_dim(ModelKind kind) {
  return kind == ModelKind::Gom ? kGomObservationDim : kLomObservationDim;
}

Observation build_observation_lom(const WorldState& state, int agent_id, const RaycastConfig& cfg) {
  const AgentState& a = state.agent(agent_id);
  Observation obs;
  obs.self_position = {a.position.x / state.arena.width, a.position.y / state.arena.height};
  obs.self_velocity = a.velocity() / state.config.prey_max_speed();
  obs.self_heading = a.heading;
  obs.rays = cast_rays(state, agent_id, cfg);
  return obs;
}

Observation build_observation_gom(const WorldState& state, int agent_id, const RaycastConfig& cfg) {
  Observation obs = build_observation_lom(state, agent_id, cfg);
  const auto& p = state.predator;
  PredatorFeatures pf;
  pf.position = {p.position.x / state.arena.width, p.position.y / state.arena.height};
  pf.heading = p.heading;
  if (state.config.predator.enabled) {
    pf.velocity = p.velocity() / p.speed;
    pf.distance = std::min(1.0, distance(p.position, state.agent(agent_id).position) / state.arena.diagonal());
  } else {
    // An absent predator reads as stationary and maximally far away.
    pf.distance = 1.0;
  }
  obs.predator = pf;
  return obs;
}

Observation build_observation(const WorldState& state, int agent_id, ModelKind kind, const RaycastConfig& cfg) {
  return kind == ModelKind::Gom ? build_observation_gom(state, agent_id, cfg)
                                : build_observation_lom(state, agent_id, cfg);
}

std::vector<double> Observation::features() const {
  std::vector<double> out;
  out.reserve(predator ? kGomObservationDim : kLomObservationDim);
  put_vec(out, self_position);
  put_vec(out, self_velocity);
  put_vec(out, self_heading);
  for (const auto& hit : rays) {
    for (int t = 0; t < kRayTagCount; ++t) out.push_back(static_cast<int>(hit.tag) == t ? 1.0 : 0.0);
    out.push_back(hit.distance);
  }
  if (predator) {
    put_vec(out, predator->position);
    put_vec(out, predator->velocity);
    put_vec(out, predator->heading);
    out.push_back(predator->distance);
  }
  return out;
}

std::vector<FeatureInfo> feature_layout(ModelKind kind) {
  std::vector<FeatureInfo> layout;
  std::size_t offset = 0;
  auto add = [&](std::string name) { layout.push_back({std::move(name), offset++}); };
  for (const char* n : {"self.position.x", "self.position.y", "self.velocity.x", "self.velocity.y",
                        "self.heading.x", "self.heading.y"})
    add(n);
  for (int k = 0; k < 18; ++k) {
    const std::string prefix = "ray" + std::to_string(k) + ".";
    for (RayTag t : {RayTag::Agent, RayTag::Predator, RayTag::Food, RayTag::Wall, RayTag::None})
      add(prefix + "is_" + std::string(to_string(t)));
    add(prefix + "distance");
  }
  if (kind == ModelKind::Gom) {
    for (const char* n : {"predator.position.x", "predator.position.y", "predator.velocity.x",
                          "predator.velocity.y", "predator.heading.x", "predator.heading.y", "predator.distance"})
      add(n);
  }
  return layout;
}

}  // namespace swarm
