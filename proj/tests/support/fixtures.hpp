#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "settag/corpus.hpp"

namespace settag::testing {

inline std::filesystem::path data_dir() { return SETTAG_DATA_DIR; }

inline std::vector<std::filesystem::path> bundled_corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(data_dir() / "corpus")) {
    if (e.path().extension() == ".tsv") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Builds a corpus from "word/TAG word/TAG ..." strings, one per document.
inline Corpus corpus_from(const std::vector<std::string>& docs) {
  std::vector<SourceText> sources;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::istringstream in(docs[d]);
    std::string item, text;
    while (in >> item) {
      const auto slash = item.rfind('/');
      text += item.substr(0, slash) + "\t" + item.substr(slash + 1) + "\n";
    }
    sources.push_back({"doc" + std::to_string(d + 1), text});
  }
  return parse_corpus(sources);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("settag-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace settag::testing
