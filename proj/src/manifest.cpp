#include "hetkg/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hetkg/error.hpp"
#include "hetkg/rng.hpp"

namespace hetkg {

std::uint64_t file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot digest " + path.string());
  std::uint64_t h = 0xCBF29CE484222325ull;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001B3ull;
    }
  }
  return h;
}

void RunManifest::add_input(const std::filesystem::path& path) {
  input_digests.emplace_back(path.string(), file_digest(path));
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << "artifact = " << kArtifactVersion << "\n";
  out << "command = " << command << "\n";
  out << "seed = " << seed << "\n";
  char hex[32];
  for (const auto& [file, digest] : input_digests) {
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(digest));
    out << "input " << file << " = " << hex << "\n";
  }
  for (const auto& o : outputs) out << "output = " << o << "\n";
  out << "duration_ms = " << duration_ms << "\n";
  out << "config_begin\n" << config_snapshot;
  if (!config_snapshot.empty() && config_snapshot.back() != '\n') out << "\n";
  out << "config_end\n";

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f << out.str();
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace hetkg
