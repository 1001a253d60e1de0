#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace shiftdecon::cli {

/// Provenance record written next to every output as `<output>.manifest.json`.
/// Holds no timestamps, so equal invocations on equal inputs give equal bytes.
struct RunManifest {
  std::vector<std::string> args;                            ///< argv without the program name
  std::vector<std::pair<std::string, std::string>> inputs;  ///< path, sha256 hex
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> parameters;

  void add_input(const std::filesystem::path& path);
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

std::string manifest_json(const RunManifest& m);
std::filesystem::path manifest_path(const std::filesystem::path& output);
void write_manifest(const std::filesystem::path& output, const RunManifest& m);

}  // namespace shiftdecon::cli
