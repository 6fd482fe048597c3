#include "cfnn/train/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cfnn/error.hpp"
#include "cfnn/train/hypernet.hpp"

namespace cfnn::train {

using nlohmann::json;

std::string checkpoint_to_string(const Model& model) {
  json doc;
  doc["format"] = "cfnn-checkpoint";
  doc["version"] = kCheckpointVersion;
  doc["architecture"] = json::parse(model.describe());
  const auto params = model.params();
  doc["params"] = std::vector<double>(params.begin(), params.end());
  return doc.dump();
}

namespace {

std::unique_ptr<Model> build(const json& arch) {
  const std::string type = arch.at("type").get<std::string>();
  if (type == "cfnn_net") {
    std::vector<LayerSpec> layers;
    for (const auto& l : arch.at("layers")) {
      layers.push_back({layer_kind_from_name(l.at("kind").get<std::string>()), l.at("width").get<std::size_t>(),
                        l.at("rate").get<double>()});
    }
    return std::make_unique<CfnnNet>(arch.at("input_dim").get<std::size_t>(), std::move(layers));
  }
  if (type == "hypernet") {
    HypernetSpec spec;
    spec.input_dim = arch.at("input_dim").get<std::size_t>();
    spec.classes = arch.at("classes").get<std::size_t>();
    spec.m = arch.at("m").get<std::size_t>();
    spec.hidden = arch.at("hidden").get<std::size_t>();
    spec.two_stage = arch.at("two_stage").get<bool>();
    spec.class_weights = arch.at("class_weights").get<std::vector<double>>();
    return std::make_unique<Hypernet>(std::move(spec));
  }
  throw DomainError("checkpoint has unknown model type '" + type + "'");
}

}  // namespace

std::unique_ptr<Model> checkpoint_from_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    require(doc.at("format").get<std::string>() == "cfnn-checkpoint", "not a cfnn checkpoint");
    const int version = doc.at("version").get<int>();
    require(version == kCheckpointVersion, "unsupported checkpoint version " + std::to_string(version));
    auto model = build(doc.at("architecture"));
    const auto values = doc.at("params").get<std::vector<double>>();
    auto params = model->params();
    require(values.size() == params.size(), "checkpoint holds " + std::to_string(values.size()) +
                                                " parameters, architecture needs " + std::to_string(params.size()));
    std::copy(values.begin(), values.end(), params.begin());
    return model;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write checkpoint '" + path + "'");
  out << checkpoint_to_string(model) << '\n';
  if (!out) throw RuntimeFailure("failed writing checkpoint '" + path + "'");
}

std::unique_ptr<Model> load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure("cannot read checkpoint '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return checkpoint_from_string(buffer.str());
}

}  // namespace cfnn::train
