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
#ifndef VFORGE_EMBEDDING_HPP
#define VFORGE_EMBEDDING_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "vforge/corpus.hpp"

namespace vforge {

using Vector = std::vector<double>;

// Word-level embedding table E_w. Immutable once built; rows are stored
// contiguously in insertion order.
class EmbeddingTable {
 public:
  EmbeddingTable(std::size_t dimension, std::vector<std::pair<std::string, Vector>> entries);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return tokens_.size(); }

  bool contains(const std::string& token) const { return index_.count(token) != 0; }
  /// Row for `token`; throws DataError when absent.
  std::span<const double> at(const std::string& token) const;
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dimension_, dimension_};
  }
  const std::string& token(std::size_t i) const { return tokens_[i]; }
  double norm(std::size_t i) const { return norms_[i]; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

 private:
  std::size_t dimension_;
  std::vector<std::string> tokens_;
  std::vector<double> values_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Reads the plain-text word-vector format: "<vocab> <dim>" header, then
/// one "<token> v1 .. vd" line per entry.
EmbeddingTable load_embeddings(const std::filesystem::path& path);
void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);

struct VectorSequence {
  std::size_t dimension = 0;
  std::vector<Vector> vectors;

  std::size_t length() const noexcept { return vectors.size(); }
  bool operator==(const VectorSequence&) const = default;
};

enum class OovPolicy { Error, ZeroVector };

VectorSequence encode(const std::vector<std::string>& tokens, const EmbeddingTable& table,
                      OovPolicy oov = OovPolicy::Error);
inline VectorSequence encode(const Instance& text, const EmbeddingTable& table,
                             OovPolicy oov = OovPolicy::Error) {
  return encode(text.tokens, table, oov);
}

/// Nearest table token to `query` by cosine similarity, ties to the
/// lexicographically smallest token. A zero query falls back to the
/// smallest Euclidean distance. Tokens in `exclude` are never returned.
std::string nearest_token(std::span<const double> query, const EmbeddingTable& table,
                          const std::unordered_set<std::string>& exclude = {});

std::vector<std::string> decode(const VectorSequence& seq, const EmbeddingTable& table);

Vector concatenate(const VectorSequence& seq);
VectorSequence split_concat(std::span<const double> flat, std::size_t dimension);

/// Pads with trailing zero vectors up to `length`.
VectorSequence pad_to(const VectorSequence& seq, std::size_t length);

Vector mean_pool(const VectorSequence& seq);

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);
bool is_zero(std::span<const double> a);

/// Index of the pool item whose mean-pooled vector is most cosine-similar to
/// the query's; lowest index wins ties. `skip` excludes one pool index.
std::size_t nearest_neighbor(const VectorSequence& query, const std::vector<VectorSequence>& pool,
                             std::optional<std::size_t> skip = std::nullopt);
/// Same search over already mean-pooled vectors.
std::size_t nearest_neighbor_pooled(std::span<const double> query, const std::vector<Vector>& pool,
                                    std::optional<std::size_t> skip = std::nullopt);

}  // namespace vforge

#endif  // VFORGE_EMBEDDING_HPP
