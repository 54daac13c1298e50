#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "mimic/nn/model.hpp"

namespace mimic::nn {

struct CheckpointMeta {
  long steps = 0;
  double final_loss = 0.0;
  nlohmann::json extra = nlohmann::json::object();  // normalization constants etc.
};

// JSON container; parameters stored as hexfloat strings so 64-bit values
// round-trip exactly.
void save_checkpoint(const std::string& path, const Network& net, const CheckpointMeta& meta);

struct LoadedModel {
  Network net;
  CheckpointMeta meta;
};

LoadedModel load_checkpoint(const std::string& path);

nlohmann::json spec_to_json(const ModelSpec& spec);
ModelSpec spec_from_json(const nlohmann::json& j);

}  // namespace mimic::nn
