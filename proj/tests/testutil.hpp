#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "hetkg/graph.hpp"

namespace hetkg::testutil {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("hetkg_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::trunc);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Nine rows covering all four relations over 2 topics, 2 articles, 2 papers,
// 2 authors, 1 institute.
inline std::string nine_row_edges() {
  return "article\tA\tcites\tpaper\tP1\n"
         "article\tB\tcites\tpaper\tP2\n"
         "article\tA\thas_topic\ttopic\tcovid\n"
         "article\tB\thas_topic\ttopic\tclimate\n"
         "article\tB\thas_topic\ttopic\tcovid\n"
         "author\tU1\tis_author_of\tpaper\tP1\n"
         "author\tU2\tis_author_of\tpaper\tP2\n"
         "author\tU1\tis_affiliated_with\tinstitute\tI1\n"
         "author\tU2\tis_affiliated_with\tinstitute\tI1\n";
}

}  // namespace hetkg::testutil
