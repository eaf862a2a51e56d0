#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hetkg/error.hpp"

namespace hetkg {

// Sectioned plain-text `key = value` config. `#` and `;` start comments.
// Unknown sections or keys raise ConfigError naming the key and line.
class Config {
 public:
  struct Entry {
    std::string value;
    std::size_t line;
  };

  static Config parse_file(const std::filesystem::path& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  // Rejects any (section, key) pair not present in `known`, which maps
  // section -> list of allowed keys.
  void check_known(const std::map<std::string, std::vector<std::string>>& known) const;

  const std::string& origin() const { return origin_; }

 private:
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::string origin_;
};

}  // namespace hetkg
