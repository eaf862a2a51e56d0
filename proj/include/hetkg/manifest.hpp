#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hetkg {

inline constexpr const char* kArtifactVersion = "hetkg 0.1.0";

std::uint64_t file_digest(const std::filesystem::path& path);

// Run provenance written atomically (tmp + rename) at the end of a command.
// Two runs with identical inputs produce manifests differing only in the
// duration line.
struct RunManifest {
  std::string command;
  std::string config_snapshot;  // full config text
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::uint64_t>> input_digests;
  std::vector<std::string> outputs;
  std::int64_t duration_ms = 0;

  void add_input(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;
};

}  // namespace hetkg
