#include "manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "shiftdecon/error.hpp"

namespace shiftdecon::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Io, "sha256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs.emplace_back(path.string(), sha256_file(path));
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  std::string command = "shiftdecon";
  for (const auto& a : m.args) command += " " + a;
  j["command"] = command;
  j["args"] = m.args;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& [path, digest] : m.inputs) j["inputs"].push_back({{"path", path}, {"sha256", digest}});
  j["seed"] = m.seed ? nlohmann::ordered_json(*m.seed) : nlohmann::ordered_json(nullptr);
  j["parameters"] = m.parameters;
  return j.dump(2) + "\n";
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

void write_manifest(const std::filesystem::path& output, const RunManifest& m) {
  const auto path = manifest_path(output);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << manifest_json(m);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace shiftdecon::cli
