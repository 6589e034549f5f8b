#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace peergroup::cli {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);
std::string utc_timestamp();

// Collects what a command read and wrote. Outputs are written through
// write() so every file lands in the manifest.
class RunRecord {
 public:
  RunRecord(std::string command, std::vector<std::string> arguments, std::filesystem::path out_dir);

  const std::filesystem::path& out_dir() const { return out_dir_; }
  nlohmann::json& config() { return config_; }
  nlohmann::json& seeds() { return seeds_; }

  void input(const std::filesystem::path& path);
  // `relative` is taken relative to the output directory.
  void write(const std::string& relative, const std::string& text);
  std::size_t output_count() const { return outputs_.size(); }

  nlohmann::json manifest() const;
  void save() const;

 private:
  std::string command_;
  std::vector<std::string> arguments_;
  std::filesystem::path out_dir_;
  std::string started_;
  nlohmann::json config_ = nlohmann::json::object();
  nlohmann::json seeds_ = nlohmann::json::object();
  nlohmann::json inputs_ = nlohmann::json::array();
  nlohmann::json outputs_ = nlohmann::json::array();
};

inline constexpr const char* kManifestName = "manifest.json";

}  // namespace peergroup::cli
