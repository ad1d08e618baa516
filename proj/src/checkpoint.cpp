#include "swarm/checkpoint.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "swarm/errors.hpp"
#include "swarm/perception.hpp"

namespace swarm {

using nlohmann::json;

namespace {

json layer_json(const std::string& name, const DenseLayer& l) {
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(l.weight.size()));
  for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
    for (Eigen::Index c = 0; c < l.weight.cols(); ++c) w.push_back(l.weight(r, c));
  std::vector<double> b(l.bias.data(), l.bias.data() + l.bias.size());
  return {{"name", name}, {"shape", {l.weight.rows(), l.weight.cols()}}, {"weights", w}, {"bias", b}};
}

const json& field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw FormatError(std::string("checkpoint is missing '") + key + "'");
  return *it;
}

DenseLayer layer_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  const auto shape = field(j, "shape").get<std::vector<Eigen::Index>>();
  const auto name = field(j, "name").get<std::string>();
  if (shape.size() != 2 || shape[0] != rows || shape[1] != cols)
    throw FormatError("checkpoint layer '" + name + "' has an unexpected shape");
  const auto w = field(j, "weights").get<std::vector<double>>();
  const auto b = field(j, "bias").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(w.size()) != rows * cols || static_cast<Eigen::Index>(b.size()) != rows)
    throw FormatError("checkpoint layer '" + name + "' has the wrong number of values");
  DenseLayer l{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) l.weight(r, c) = w[static_cast<std::size_t>(r * cols + c)];
    l.bias(r) = b[static_cast<std::size_t>(r)];
  }
  return l;
}

}  // namespace

json checkpoint_to_json(const Checkpoint& ckpt) {
  const auto& p = ckpt.params;
  json layers = json::array();
  for (std::size_t k = 0; k < p.trunk.size(); ++k) layers.push_back(layer_json("trunk." + std::to_string(k), p.trunk[k]));
  layers.push_back(layer_json("mean_head", p.mean_head));
  layers.push_back(layer_json("value_head", p.value_head));
  layers.push_back({{"name", "log_std"},
                    {"shape", {p.log_std.size()}},
                    {"weights", std::vector<double>(p.log_std.data(), p.log_std.data() + p.log_std.size())}});
  return {{"format_version", kCheckpointFormatVersion},
          {"model_kind", std::string(to_string(ckpt.model))},
          {"obs_dim", p.obs_dim()},
          {"action_dim", kActionDim},
          {"hidden_units", p.hidden_units()},
          {"num_layers", p.num_layers()},
          {"layers", layers},
          {"training_step", ckpt.training_step},
          {"config_digest", ckpt.config_digest}};
}

Checkpoint checkpoint_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw FormatError("checkpoint must be a JSON object");
    const int version = field(doc, "format_version").get<int>();
    if (version != kCheckpointFormatVersion)
      throw FormatError("unsupported checkpoint format_version " + std::to_string(version) + " (this build reads " +
                        std::to_string(kCheckpointFormatVersion) + ")");
    Checkpoint c;
    try {
      c.model = parse_model_kind(field(doc, "model_kind").get<std::string>());
    } catch (const ConfigError& e) {
      throw FormatError(std::string("checkpoint: ") + e.what());
    }
    const int obs_dim = field(doc, "obs_dim").get<int>();
    const int action_dim = field(doc, "action_dim").get<int>();
    const int hidden = field(doc, "hidden_units").get<int>();
    const int n_layers = field(doc, "num_layers").get<int>();
    if (action_dim != kActionDim) throw FormatError("checkpoint action_dim must be " + std::to_string(kActionDim));
    if (obs_dim < 1 || hidden < 1 || n_layers < 1) throw FormatError("checkpoint has invalid dimensions");

    const json& layers = field(doc, "layers");
    if (!layers.is_array() || layers.size() != static_cast<std::size_t>(n_layers) + 3)
      throw FormatError("checkpoint layer list has the wrong length");
    PolicyParameters p;
    Eigen::Index in = obs_dim;
    for (int k = 0; k < n_layers; ++k) {
      p.trunk.push_back(layer_from_json(layers[static_cast<std::size_t>(k)], hidden, in));
      in = hidden;
    }
    p.mean_head = layer_from_json(layers[static_cast<std::size_t>(n_layers)], kActionDim, hidden);
    p.value_head = layer_from_json(layers[static_cast<std::size_t>(n_layers) + 1], 1, hidden);
    const auto log_std = field(layers[static_cast<std::size_t>(n_layers) + 2], "weights").get<std::vector<double>>();
    if (log_std.size() != kActionDim) throw FormatError("checkpoint log_std has the wrong length");
    p.log_std = Eigen::Map<const Eigen::VectorXd>(log_std.data(), kActionDim);

    c.params = std::move(p);
    c.training_step = field(doc, "training_step").get<std::int64_t>();
    c.config_digest = field(doc, "config_digest").get<std::string>();
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint '" + tmp + "'");
    out << checkpoint_to_json(ckpt).dump() << '\n';
    if (!out) throw std::runtime_error("failed writing checkpoint '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("checkpoint '" + path + "' does not parse: " + e.what());
  }
  return checkpoint_from_json(doc);
}

void require_compatible(const Checkpoint& ckpt, ModelKind model) {
  const auto expected = static_cast<int>(observation_dim(model));
  if (ckpt.params.obs_dim() != expected)
    throw DimensionError("checkpoint obs_dim " + std::to_string(ckpt.params.obs_dim()) + " (" +
                         std::string(to_string(ckpt.model)) + ") does not match the " +
                         std::string(to_string(model)) + " observation width " + std::to_string(expected));
}

}  // namespace swarm
