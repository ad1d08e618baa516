#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/world.hpp"

namespace swarm {

enum class RayTag { Agent, Predator, Food, Wall, None };
inline constexpr int kRayTagCount = 5;

std::string_view to_string(RayTag tag);

struct RayHit {
  RayTag tag = RayTag::None;
  double distance = 1.0;  // hit distance / range; 1.0 when nothing is hit

  bool operator==(const RayHit&) const = default;
};

// Body-relative bearing of ray k in radians, positive to the left. Rays are
// evenly spaced over the spread and symmetric about the heading.
double ray_bearing(const RaycastConfig& cfg, int k);

// Nearest intersection per ray (discs and walls within range). The casting
// agent's own body is ignored; a ray starting inside another disc hits it at 0.
// Throws LookupError for an unknown agent id.
std::vector<RayHit> cast_rays(const WorldState& state, int agent_id, const RaycastConfig& cfg);

struct PredatorFeatures {
  Vec2 position;  // normalized by arena size
  Vec2 velocity;  // normalized by predator speed
  Vec2 heading;
  double distance = 0.0;  // normalized by arena diagonal

  bool operator==(const PredatorFeatures&) const = default;
};

struct Observation {
  Vec2 self_position;  // normalized by arena size
  Vec2 self_velocity;  // normalized by prey max speed
  Vec2 self_heading;
  std::vector<RayHit> rays;
  std::optional<PredatorFeatures> predator;  // present for GOM only

  // Flat feature vector: self (6) | rays (18 x [5-way one-hot, distance]) | predator (7).
  std::vector<double> features() const;
  bool operator==(const Observation&) const = default;
};

inline constexpr std::size_t kSelfFeatures = 6;
inline constexpr std::size_t kFeaturesPerRay = kRayTagCount + 1;
inline constexpr std::size_t kRayFeatures = 18 * kFeaturesPerRay;
inline constexpr std::size_t kPredatorFeatures = 7;
inline constexpr std::size_t kLomObservationDim = kSelfFeatures + kRayFeatures;
inline constexpr std::size_t kGomObservationDim = kLomObservationDim + kPredatorFeatures;

// 114 for LOM, 121 for GOM. Boids have no observation; they report the LOM width.
std::size_t observation_dim(ModelKind kind);

Observation build_observation_lom(const WorldState& state, int agent_id, const RaycastConfig& cfg);
Observation build_observation_gom(const WorldState& state, int agent_id, const RaycastConfig& cfg);
Observation build_observation(const WorldState& state, int agent_id, ModelKind kind, const RaycastConfig& cfg);

struct FeatureInfo {
  std::string name;
  std::size_t offset = 0;
};

// Name -> offset table for the flat feature vector.
std::vector<FeatureInfo> feature_layout(ModelKind kind);

}  // namespace swarm
