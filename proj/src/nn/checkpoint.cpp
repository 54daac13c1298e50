#include "mimic/nn/checkpoint.hpp"

#include "mimic/util/errors.hpp"
#include "mimic/util/io.hpp"

namespace mimic::nn {

using util::ValidationError;

namespace {
constexpr const char* kFormat = "mimic-model";
constexpr int kVersion = 1;
}  // namespace

nlohmann::json spec_to_json(const ModelSpec& spec) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : spec.layers) {
    layers.push_back({
        {"kind", l.kind == LayerKind::Dense ? "dense" : "recurrent"},
        {"in", l.in_dim},
        {"out", l.out_dim},
        {"activation", l.activation == Activation::Relu ? "relu" : "linear"},
    });
  }
  return {{"seed", spec.seed}, {"layers", layers}};
}

ModelSpec spec_from_json(const nlohmann::json& j) {
  ModelSpec spec;
  spec.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& l : j.at("layers")) {
    LayerSpec ls;
    const std::string kind = l.at("kind").get<std::string>();
    if (kind == "dense") {
      ls.kind = LayerKind::Dense;
    } else if (kind == "recurrent") {
      ls.kind = LayerKind::Recurrent;
    } else {
      throw ValidationError("model spec: unknown layer kind '" + kind + "'");
    }
    ls.in_dim = l.at("in").get<std::size_t>();
    ls.out_dim = l.at("out").get<std::size_t>();
    const std::string act = l.at("activation").get<std::string>();
    if (act == "relu") {
      ls.activation = Activation::Relu;
    } else if (act == "linear") {
      ls.activation = Activation::Linear;
    } else {
      throw ValidationError("model spec: unknown activation '" + act + "'");
    }
    spec.layers.push_back(ls);
  }
  spec.validate();
  return spec;
}

void save_checkpoint(const std::string& path, const Network& net, const CheckpointMeta& meta) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& layer : net.params()) {
    nlohmann::json tensors = nlohmann::json::array();
    for (const auto& t : layer.tensors) {
      nlohmann::json vals = nlohmann::json::array();
      for (double v : t.values) vals.push_back(util::double_to_hex(v));
      tensors.push_back(std::move(vals));
    }
    params.push_back(std::move(tensors));
  }
  const nlohmann::json doc = {
      {"format", kFormat},
      {"version", kVersion},
      {"spec", spec_to_json(net.spec())},
      {"params", std::move(params)},
      {"meta",
       {{"steps", meta.steps}, {"final_loss", meta.final_loss}, {"extra", meta.extra}}},
  };
  util::write_file_atomic(path, doc.dump(1));
}

LoadedModel load_checkpoint(const std::string& path) {
  const nlohmann::json doc = util::load_json_file(path);
  if (doc.value("format", "") != kFormat) {
    throw ValidationError(path + ": not a model checkpoint");
  }
  if (doc.value("version", -1) != kVersion) {
    throw ValidationError(path + ": unsupported checkpoint version");
  }
  Network net(spec_from_json(doc.at("spec")));
  const auto& params = doc.at("params");
  if (params.size() != net.params().size()) {
    throw ValidationError(path + ": parameter layer count mismatch");
  }
  for (std::size_t li = 0; li < params.size(); ++li) {
    auto& layer = net.params()[li];
    if (params[li].size() != layer.tensors.size()) {
      throw ValidationError(path + ": tensor count mismatch in layer " + std::to_string(li));
    }
    for (std::size_t ti = 0; ti < layer.tensors.size(); ++ti) {
      auto& t = layer.tensors[ti];
      const auto& vals = params[li][ti];
      if (vals.size() != t.size()) {
        throw ValidationError(path + ": tensor size mismatch in layer " + std::to_string(li));
      }
      for (std::size_t k = 0; k < t.size(); ++k) {
        t.values[k] = util::hex_to_double(vals[k].get<std::string>());
      }
    }
  }
  CheckpointMeta meta;
  const auto& m = doc.at("meta");
  meta.steps = m.value("steps", 0L);
  meta.final_loss = m.value("final_loss", 0.0);
  meta.extra = m.value("extra", nlohmann::json::object());
  return {std::move(net), std::move(meta)};
}

}  // namespace mimic::nn
