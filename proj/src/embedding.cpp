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
#include "vforge/embedding.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "vforge/error.hpp"

namespace vforge {
namespace {

// Scores closer than this are treated as ties.
constexpr double kTieTolerance = 1e-12;

bool beats(double score, const std::string& token, double best, const std::string* best_token) {
  if (best_token == nullptr) return true;
  const double tol = kTieTolerance * std::max(1.0, std::abs(best));
  if (score > best + tol) return true;
  if (score >= best - tol) return token < *best_token;
  return false;
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dimension, std::vector<std::pair<std::string, Vector>> entries)
    : dimension_(dimension) {
  if (dimension_ == 0) throw DataError("embedding dimension must be positive");
  if (entries.size() < 2) throw DataError("embedding table needs at least 2 entries");
  tokens_.reserve(entries.size());
  values_.reserve(entries.size() * dimension_);
  norms_.reserve(entries.size());
  for (auto& [token, vec] : entries) {
    if (vec.size() != dimension_)
      throw DimensionMismatch("entry '" + token + "' has " + std::to_string(vec.size()) +
                              " components, expected " + std::to_string(dimension_));
    for (double v : vec)
      if (!std::isfinite(v)) throw DataError("entry '" + token + "' has a non-finite component");
    if (!index_.emplace(token, tokens_.size()).second)
      throw DataError("duplicate embedding token '" + token + "'");
    tokens_.push_back(std::move(token));
    values_.insert(values_.end(), vec.begin(), vec.end());
    norms_.push_back(l2_norm(vec));
  }
}

std::span<const double> EmbeddingTable::at(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) throw DataError("token '" + token + "' not in embedding table");
  return row(it->second);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string(), 1, "missing header");
  std::size_t vocab = 0;
  std::size_t dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> vocab >> dim)) throw ParseError(path.string(), 1, "header must be '<vocab_size> <dimension>'");
  }
  std::vector<std::pair<std::string, Vector>> entries;
  entries.reserve(vocab);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::string token;
    row >> token;
    Vector vec;
    vec.reserve(dim);
    std::string field;
    while (row >> field) {
      try {
        std::size_t used = 0;
        vec.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw ParseError(path.string(), lineno, "bad number '" + field + "'");
      }
    }
    if (vec.size() != dim)
      throw ParseError(path.string(), lineno,
                       "expected " + std::to_string(dim) + " components, got " + std::to_string(vec.size()));
    entries.emplace_back(std::move(token), std::move(vec));
  }
  if (entries.size() != vocab)
    throw ParseError(path.string(), lineno,
                     "header announces " + std::to_string(vocab) + " entries, file has " +
                         std::to_string(entries.size()));
  try {
    return EmbeddingTable(dim, std::move(entries));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write embedding file " + path.string());
  out << table.size() << ' ' << table.dimension() << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.token(i);
    for (double v : table.row(i)) out << ' ' << v;
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot product of vectors with different lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

bool is_zero(std::span<const double> a) {
  for (double v : a)
    if (v != 0.0) return false;
  return true;
}

VectorSequence encode(const std::vector<std::string>& tokens, const EmbeddingTable& table, OovPolicy oov) {
  if (tokens.empty()) throw DataError("cannot encode an empty token list");
  VectorSequence seq{table.dimension(), {}};
  seq.vectors.reserve(tokens.size());
  for (const std::string& tok : tokens) {
    if (table.contains(tok)) {
      auto r = table.at(tok);
      seq.vectors.emplace_back(r.begin(), r.end());
    } else if (oov == OovPolicy::ZeroVector) {
      seq.vectors.emplace_back(table.dimension(), 0.0);
    } else {
      throw DataError("out-of-vocabulary token '" + tok + "'");
    }
  }
  return seq;
}

std::string nearest_token(std::span<const double> query, const EmbeddingTable& table,
                          const std::unordered_set<std::string>& exclude) {
  if (query.size() != table.dimension())
    throw DimensionMismatch("query has " + std::to_string(query.size()) + " components, table has " +
                            std::to_string(table.dimension()));
  const double qnorm = l2_norm(query);
  const std::string* best_token = nullptr;
  double best = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string& tok = table.token(i);
    if (exclude.count(tok)) continue;
    double score;
    if (qnorm == 0.0) {
      score = -table.norm(i);  // nearest to the origin
    } else if (table.norm(i) == 0.0) {
      score = 0.0;
    } else {
      score = dot(query, table.row(i)) / (qnorm * table.norm(i));
    }
    if (beats(score, tok, best, best_token)) {
      best = score;
      best_token = &tok;
    }
  }
  if (best_token == nullptr) throw DataError("no eligible token left in embedding table");
  return *best_token;
}

std::vector<std::string> decode(const VectorSequence& seq, const EmbeddingTable& table) {
  if (seq.dimension != table.dimension())
    throw DimensionMismatch("sequence dimension " + std::to_string(seq.dimension) + " != table dimension " +
                            std::to_string(table.dimension()));
  std::vector<std::string> out;
  out.reserve(seq.length());
  for (const Vector& v : seq.vectors) out.push_back(nearest_token(v, table));
  return out;
}

Vector concatenate(const VectorSequence& seq) {
  Vector flat;
  flat.reserve(seq.length() * seq.dimension);
  for (const Vector& v : seq.vectors) flat.insert(flat.end(), v.begin(), v.end());
  return flat;
}

VectorSequence split_concat(std::span<const double> flat, std::size_t dimension) {
  if (dimension == 0) throw DataError("dimension must be positive");
  if (flat.size() % dimension != 0)
    throw DimensionMismatch("length " + std::to_string(flat.size()) + " is not a multiple of " +
                            std::to_string(dimension));
  VectorSequence seq{dimension, {}};
  for (std::size_t off = 0; off < flat.size(); off += dimension)
    seq.vectors.emplace_back(flat.begin() + off, flat.begin() + off + dimension);
  return seq;
}

VectorSequence pad_to(const VectorSequence& seq, std::size_t length) {
  VectorSequence out = seq;
  while (out.vectors.size() < length) out.vectors.emplace_back(seq.dimension, 0.0);
  return out;
}

Vector mean_pool(const VectorSequence& seq) {
  Vector mean(seq.dimension, 0.0);
  if (seq.vectors.empty()) return mean;
  for (const Vector& v : seq.vectors)
    for (std::size_t i = 0; i < seq.dimension; ++i) mean[i] += v[i];
  for (double& m : mean) m /= static_cast<double>(seq.vectors.size());
  return mean;
}

std::size_t nearest_neighbor_pooled(std::span<const double> query, const std::vector<Vector>& pool,
                                    std::optional<std::size_t> skip) {
  const double qnorm = l2_norm(query);
  std::optional<std::size_t> best_index;
  double best = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (skip && *skip == i) continue;
    if (pool[i].size() != query.size()) throw DimensionMismatch("pool item " + std::to_string(i) + " has a different dimension");
    double score;
    if (qnorm == 0.0) {
      score = -l2_norm(pool[i]);
    } else {
      const double n = l2_norm(pool[i]);
      score = n == 0.0 ? 0.0 : dot(query, pool[i]) / (qnorm * n);
    }
    if (!best_index || score > best + kTieTolerance * std::max(1.0, std::abs(best))) {
      best = score;
      best_index = i;
    }
  }
  if (!best_index) throw DataError("nearest-neighbor pool is empty");
  return *best_index;
}

std::size_t nearest_neighbor(const VectorSequence& query, const std::vector<VectorSequence>& pool,
                             std::optional<std::size_t> skip) {
  std::vector<Vector> means;
  means.reserve(pool.size());
  for (const VectorSequence& s : pool) {
    if (s.dimension != query.dimension) throw DimensionMismatch("pool sequence dimension differs from query");
    means.push_back(mean_pool(s));
  }
  return nearest_neighbor_pooled(mean_pool(query), means, skip);
}

}  // namespace vforge
