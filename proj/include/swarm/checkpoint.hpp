#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "swarm/config.hpp"
#include "swarm/network.hpp"

namespace swarm {

inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
  ModelKind model = ModelKind::Lom;
  PolicyParameters params;
  std::int64_t training_step = 0;
  std::string config_digest;
};

nlohmann::json checkpoint_to_json(const Checkpoint& ckpt);
// Throws FormatError for malformed documents or an unsupported format_version.
Checkpoint checkpoint_from_json(const nlohmann::json& doc);

// Writes through a temporary file and renames, so a crash never leaves a
// half-written checkpoint behind.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// Throws DimensionError when the checkpoint was trained for a different
// observation width than `model` produces.
void require_compatible(const Checkpoint& ckpt, ModelKind model);

}  // namespace swarm
