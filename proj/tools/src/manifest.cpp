#include "manifest.hpp"

#include <chrono>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "peergroup/error.hpp"
#include "peergroup/io.hpp"

namespace peergroup::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw InvariantError("SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text_file(path)); }

std::string utc_timestamp() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::now()));
}

RunRecord::RunRecord(std::string command, std::vector<std::string> arguments,
                     std::filesystem::path out_dir)
    : command_(std::move(command)), arguments_(std::move(arguments)), out_dir_(std::move(out_dir)),
      started_(utc_timestamp()) {}

void RunRecord::input(const std::filesystem::path& path) {
  inputs_.push_back({{"path", path.string()}, {"sha256", sha256_file(path)}});
}

void RunRecord::write(const std::string& relative, const std::string& text) {
  write_text_file(out_dir_ / relative, text);
  outputs_.push_back({{"path", relative}, {"sha256", sha256_hex(text)}, {"bytes", text.size()}});
}

nlohmann::json RunRecord::manifest() const {
  nlohmann::json m;
  m["tool"] = "peergroup";
  m["command"] = command_;
  m["arguments"] = arguments_;
  m["working_directory"] = std::filesystem::current_path().string();
  m["output_directory"] = out_dir_.string();
  m["config"] = config_;
  m["seeds"] = seeds_;
  m["inputs"] = inputs_;
  m["outputs"] = outputs_;
  m["started_at"] = started_;
  m["finished_at"] = utc_timestamp();
  return m;
}

void RunRecord::save() const { write_text_file(out_dir_ / kManifestName, manifest().dump(2) + "\n"); }

}  // namespace peergroup::cli
