#include "lsr/model_io.hpp"

#include "lsr/error.hpp"

#include <fstream>
#include <sstream>

namespace lsr {

namespace {
constexpr const char* kFormat = "lsrobust-dense-v1";
}

nlohmann::json network_to_json(const DenseNetwork& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : net.layers()) {
    layers.push_back({{"inputs", layer.inputs},
                      {"outputs", layer.outputs},
                      {"activation", activation_name(layer.activation)},
                      {"weights", layer.weights},
                      {"bias", layer.bias}});
  }
  return {{"format", kFormat}, {"layers", std::move(layers)}};
}

DenseNetwork network_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kFormat) {
      throw ParseError("unsupported model format '" + doc.at("format").get<std::string>() + "'");
    }
    std::vector<DenseLayer> layers;
    for (const auto& j : doc.at("layers")) {
      DenseLayer layer;
      layer.inputs = j.at("inputs").get<std::size_t>();
      layer.outputs = j.at("outputs").get<std::size_t>();
      layer.activation = parse_activation(j.at("activation").get<std::string>());
      layer.weights = j.at("weights").get<std::vector<double>>();
      layer.bias = j.at("bias").get<std::vector<double>>();
      layers.push_back(std::move(layer));
    }
    return DenseNetwork(std::move(layers));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_network(const DenseNetwork& net, const std::filesystem::path& path) {
  write_text_file(path, network_to_json(net).dump() + "\n");
}

DenseNetwork load_network(const std::filesystem::path& path) {
  try {
    return network_from_json(nlohmann::json::parse(read_text_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace lsr
