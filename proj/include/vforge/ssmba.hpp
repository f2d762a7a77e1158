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
#ifndef VFORGE_SSMBA_HPP
#define VFORGE_SSMBA_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "vforge/corpus.hpp"
#include "vforge/embedding.hpp"
#include "vforge/rng.hpp"

namespace vforge {

enum class MaskStrategy { RandomOne, Lexicon };

struct MaskPolicy {
  MaskStrategy strategy = MaskStrategy::RandomOne;
  std::unordered_set<std::string> lexicon;  // lowercased
  std::string mask_token = "[MASK]";
  std::uint64_t seed = 0;
};

void validate(const MaskPolicy& policy);

/// One lowercased word per line; blank lines ignored.
std::unordered_set<std::string> load_lexicon(const std::filesystem::path& path);

/// ASCII lowercase; other bytes pass through unchanged.
std::string ascii_lower(std::string_view s);

struct Corruption {
  std::vector<std::string> tokens;     // with mask tokens substituted
  std::vector<std::size_t> positions;  // ascending
  std::vector<std::string> originals;  // token formerly at each position
};

/// Masks lexicon hits, or one uniformly chosen token when the policy is
/// RandomOne or the text has no lexicon hit.
Corruption corrupt(const Instance& instance, const MaskPolicy& policy, Engine& rng);
Corruption corrupt(const Instance& instance, const MaskPolicy& policy);

struct MaskedText {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<std::size_t> positions;
  std::vector<std::string> originals;
  std::string mask_token = "[MASK]";
};

// Fills masked positions. Implementations return exactly one token per
// position and must be safe to call concurrently.
class Reconstructor {
 public:
  virtual ~Reconstructor() = default;
  virtual std::vector<std::string> fill(const MaskedText& text) const = 0;
  virtual std::string name() const = 0;
};

/// Fills each masked position with the table token closest (cosine) to the
/// mean embedding of up to `context_window` unmasked in-vocabulary
/// neighbours per side, never the original token nor the mask token.
/// Positions without usable context get the lexicographically first
/// eligible table token.
std::vector<std::string> reconstruct_embed(const std::vector<std::string>& masked,
                                           const std::vector<std::size_t>& positions,
                                           const EmbeddingTable& table, int context_window,
                                           const std::vector<std::string>& originals = {},
                                           const std::string& mask_token = "[MASK]");

class EmbeddingReconstructor final : public Reconstructor {
 public:
  EmbeddingReconstructor(const EmbeddingTable& table, int context_window = 2);
  std::vector<std::string> fill(const MaskedText& text) const override;
  std::string name() const override { return "embedding-centroid"; }

 private:
  const EmbeddingTable& table_;
  int window_;
};

// Remote reconstructor: POST {"tokens": [...], "mask_positions": [...]} and
// expects {"fills": [...]} back.
class HttpReconstructor final : public Reconstructor {
 public:
  explicit HttpReconstructor(std::string url, std::chrono::milliseconds timeout = std::chrono::seconds(30));
  std::vector<std::string> fill(const MaskedText& text) const override;
  std::string name() const override { return "http:" + url_; }

 private:
  std::string url_;
  std::string host_;  // scheme://host[:port]
  std::string path_;
  std::chrono::milliseconds timeout_;
};

/// `rounds` corrupt/reconstruct variants per instance, labels preserved.
/// Output order is instance order then round, independent of `threads`.
Corpus ssmba_generate(const Corpus& corpus, const MaskPolicy& policy, const Reconstructor& reconstructor,
                      int rounds = 1, int threads = 1);

}  // namespace vforge

#endif  // VFORGE_SSMBA_HPP
