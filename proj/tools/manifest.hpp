#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ecosim::cli {

// Provenance record written next to every artifact.
struct RunManifest {
    std::vector<std::string> command_line;
    std::string config_hash;
    std::string dataset_hash;
    std::vector<std::uint64_t> seeds;
    std::string tool_version;
    double wall_time_seconds = 0.0;
    std::vector<std::string> outputs;

    nlohmann::json to_json() const;
};

std::string sha256_hex(std::string_view bytes);

// Hash of a dataset directory's data files in a fixed order.
std::string dataset_hash(const std::filesystem::path& dir);

// SHA-256 of the canonical (sorted-key, compact) dump.
std::string json_hash(const nlohmann::json& j);

} // namespace ecosim::cli
