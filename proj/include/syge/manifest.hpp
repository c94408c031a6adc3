#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace syge {

// Provenance record written next to every artifact. Two runs of the same
// command in deterministic mode differ only in created_utc.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::string created_utc;
  uint64_t seed = 0;
  bool has_seed = false;
  nlohmann::json config;                                    // effective settings
  std::vector<std::pair<std::string, std::string>> inputs;  // path -> content hash
  std::vector<std::string> outputs;
};

// "fnv1a64:<16 hex digits>" over the raw bytes of the file as stored.
std::string hash_file_fnv1a(const std::string& path);

// `git describe` of the working tree if available, else "unknown".
std::string tool_version_string();

std::string utc_timestamp();

void manifest_write(const RunManifest& m, const std::string& path);

}  // namespace syge
