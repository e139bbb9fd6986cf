#pragma once

#include "lsr/network.hpp"

#include <filesystem>
#include <json.hpp>

namespace lsr {

/// {"format": "lsrobust-dense-v1", "layers": [{inputs, outputs, activation,
/// weights, bias}, ...]}. Doubles round-trip exactly.
nlohmann::json network_to_json(const DenseNetwork& net);
/// Throws ParseError on malformed documents.
DenseNetwork network_from_json(const nlohmann::json& doc);

void save_network(const DenseNetwork& net, const std::filesystem::path& path);
DenseNetwork load_network(const std::filesystem::path& path);

/// Write `text` to `path`, creating parent directories. Throws ConfigError
/// when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace lsr
