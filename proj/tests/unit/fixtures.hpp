/**
 * Copyright 2026 The vicinity-forge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef VFORGE_TESTS_FIXTURES_HPP
#define VFORGE_TESTS_FIXTURES_HPP

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vforge/corpus.hpp"
#include "vforge/embedding.hpp"

namespace vforge::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "vforge") {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / (tag + "-" + std::to_string(rd()) + std::to_string(rd()));
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

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Instance make_instance(std::string id, std::vector<std::string> tokens, int label, std::string language = "en",
                              Domain domain = Domain::GAO) {
  Instance inst;
  inst.id = std::move(id);
  inst.tokens = std::move(tokens);
  inst.label = label;
  inst.language = std::move(language);
  inst.domain = domain;
  return inst;
}

// A 999-instance corpus laid out like the ALL set: 99 GAO, 300 TRAC, 600 WUL.
// Tokens cycle through `vocab` so the corpus is encodable.
inline Corpus make_all_corpus(const std::string& language = "en",
                              const std::vector<std::string>& vocab = {"w0", "w1", "w2", "w3", "w4"}) {
  Corpus c;
  c.name = "all-" + language;
  const std::pair<Domain, int> layout[] = {{Domain::GAO, 99}, {Domain::TRAC, 300}, {Domain::WUL, 600}};
  int k = 0;
  for (const auto& [domain, count] : layout) {
    for (int i = 0; i < count; ++i, ++k) {
      std::vector<std::string> toks;
      const int len = 1 + k % 4;
      for (int t = 0; t < len; ++t) toks.push_back(vocab[static_cast<std::size_t>(k * 7 + t * 3) % vocab.size()]);
      c.instances.push_back(
          make_instance(language + "-" + std::to_string(k), std::move(toks), k % 3 == 0 ? 1 : 0, language, domain));
    }
  }
  return c;
}

// Random table of `size` tokens "t0".."t{size-1}" in `dim` dimensions.
inline EmbeddingTable random_table(std::size_t size, std::size_t dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<std::pair<std::string, Vector>> rows;
  for (std::size_t i = 0; i < size; ++i) {
    Vector v(dim);
    for (double& x : v) x = g(rng);
    rows.emplace_back("t" + std::to_string(i), std::move(v));
  }
  return EmbeddingTable(dim, std::move(rows));
}

}  // namespace vforge::testing

#endif  // VFORGE_TESTS_FIXTURES_HPP
