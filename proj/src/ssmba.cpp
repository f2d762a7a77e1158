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
#include "vforge/ssmba.hpp"

#include <algorithm>
#include <fstream>

#include "httplib.h"
#include "json.hpp"
#include "vforge/error.hpp"
#include "vforge/parallel.hpp"

namespace vforge {

void validate(const MaskPolicy& policy) {
  if (policy.strategy == MaskStrategy::Lexicon && policy.lexicon.empty())
    throw DataError("lexicon masking needs a nonempty lexicon");
  if (policy.mask_token.empty()) throw DataError("mask token must not be empty");
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::unordered_set<std::string> load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    words.insert(ascii_lower(line.substr(start)));
  }
  return words;
}

Corruption corrupt(const Instance& instance, const MaskPolicy& policy, Engine& rng) {
  validate(policy);
  if (instance.tokens.empty()) throw DataError("instance '" + instance.id + "' has no tokens");
  Corruption out;
  out.tokens = instance.tokens;
  if (policy.strategy == MaskStrategy::Lexicon) {
    for (std::size_t i = 0; i < instance.tokens.size(); ++i)
      if (policy.lexicon.count(ascii_lower(instance.tokens[i]))) out.positions.push_back(i);
  }
  if (out.positions.empty())
    out.positions.push_back(static_cast<std::size_t>(uniform_index(rng, instance.tokens.size())));
  for (std::size_t p : out.positions) {
    out.originals.push_back(out.tokens[p]);
    out.tokens[p] = policy.mask_token;
  }
  return out;
}

Corruption corrupt(const Instance& instance, const MaskPolicy& policy) {
  Engine rng = substream(policy.seed, "ssmba-mask");
  return corrupt(instance, policy, rng);
}

std::vector<std::string> reconstruct_embed(const std::vector<std::string>& masked,
                                           const std::vector<std::size_t>& positions,
                                           const EmbeddingTable& table, int context_window,
                                           const std::vector<std::string>& originals,
                                           const std::string& mask_token) {
  if (table.size() == 0) throw DataError("reconstruction needs a nonempty embedding table");
  if (context_window < 1) throw DataError("context window must be at least 1");
  if (!originals.empty() && originals.size() != positions.size())
    throw DataError("originals must align with mask positions");

  std::vector<bool> is_masked(masked.size(), false);
  for (std::size_t p : positions) {
    if (p >= masked.size()) throw DataError("mask position " + std::to_string(p) + " out of range");
    is_masked[p] = true;
  }

  const auto window = static_cast<std::size_t>(context_window);
  std::vector<std::string> fills;
  fills.reserve(positions.size());
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const std::size_t p = positions[k];
    std::unordered_set<std::string> exclude = {mask_token};
    if (!originals.empty()) exclude.insert(originals[k]);

    Vector centroid(table.dimension(), 0.0);
    std::size_t used = 0;
    const std::size_t lo = p >= window ? p - window : 0;
    const std::size_t hi = std::min(masked.size() - 1, p + window);
    for (std::size_t q = lo; q <= hi; ++q) {
      if (q == p || is_masked[q] || !table.contains(masked[q])) continue;
      auto row = table.at(masked[q]);
      for (std::size_t d = 0; d < centroid.size(); ++d) centroid[d] += row[d];
      ++used;
    }

    if (used == 0) {
      std::vector<std::string> eligible;
      for (const std::string& tok : table.tokens())
        if (!exclude.count(tok)) eligible.push_back(tok);
      if (eligible.empty()) throw DataError("no eligible reconstruction token");
      fills.push_back(*std::min_element(eligible.begin(), eligible.end()));
      continue;
    }
    for (double& c : centroid) c /= static_cast<double>(used);
    fills.push_back(nearest_token(centroid, table, exclude));
  }
  return fills;
}

EmbeddingReconstructor::EmbeddingReconstructor(const EmbeddingTable& table, int context_window)
    : table_(table), window_(context_window) {
  if (window_ < 1) throw DataError("context window must be at least 1");
}

std::vector<std::string> EmbeddingReconstructor::fill(const MaskedText& text) const {
  return reconstruct_embed(text.tokens, text.positions, table_, window_, text.originals, text.mask_token);
}

HttpReconstructor::HttpReconstructor(std::string url, std::chrono::milliseconds timeout)
    : url_(std::move(url)), timeout_(timeout) {
  const auto scheme_end = url_.find("://");
  if (scheme_end == std::string::npos || url_.compare(0, scheme_end, "http") != 0)
    throw DataError("reconstructor URL must start with http://, got '" + url_ + "'");
  const auto path_start = url_.find('/', scheme_end + 3);
  host_ = url_.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url_.substr(path_start);
}

std::vector<std::string> HttpReconstructor::fill(const MaskedText& text) const {
  nlohmann::json body = {{"tokens", text.tokens}, {"mask_positions", text.positions}};
  httplib::Client client(host_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  auto res = client.Post(path_, body.dump(), "application/json");
  if (!res) {
    throw DataError("instance '" + text.id + "': reconstructor request failed (" + httplib::to_string(res.error()) +
                    ")");
  }
  if (res->status != 200)
    throw DataError("instance '" + text.id + "': reconstructor returned HTTP " + std::to_string(res->status));
  std::vector<std::string> fills;
  try {
    fills = nlohmann::json::parse(res->body).at("fills").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("instance '" + text.id + "': malformed reconstructor response: " + e.what());
  }
  if (fills.size() != text.positions.size())
    throw DataError("instance '" + text.id + "': reconstructor returned " + std::to_string(fills.size()) +
                    " fills for " + std::to_string(text.positions.size()) + " masks");
  return fills;
}

Corpus ssmba_generate(const Corpus& corpus, const MaskPolicy& policy, const Reconstructor& reconstructor,
                      int rounds, int threads) {
  validate(policy);
  if (rounds < 1) throw DataError("ssmba rounds must be at least 1");
  const auto r = static_cast<std::size_t>(rounds);
  const std::size_t total = corpus.size() * r;
  std::vector<Instance> out(total);

  parallel_for(total, threads, [&](std::size_t slot) {
    const Instance& parent = corpus[slot / r];
    const std::size_t round = slot % r;
    if (!parent.label) throw DataError("instance '" + parent.id + "' is unlabeled");
    Engine rng = substream(policy.seed, "ssmba-mask", slot);
    Corruption c = corrupt(parent, policy, rng);

    MaskedText masked{parent.id, c.tokens, c.positions, c.originals, policy.mask_token};
    std::vector<std::string> fills = reconstructor.fill(masked);
    if (fills.size() != c.positions.size())
      throw DataError("instance '" + parent.id + "': reconstructor returned wrong number of fills");

    Instance synth;
    synth.id = parent.id + "#ssmba" + std::to_string(round + 1);
    synth.tokens = std::move(c.tokens);
    for (std::size_t k = 0; k < fills.size(); ++k) {
      if (fills[k] == policy.mask_token || fills[k].empty())
        throw DataError("instance '" + parent.id + "': reconstructor returned an unusable fill");
      synth.tokens[c.positions[k]] = fills[k];
    }
    synth.label = parent.label;
    synth.language = parent.language;
    synth.domain = parent.domain;
    synth.provenance = Provenance{"SSMBA", {parent.id}, std::nullopt};
    out[slot] = std::move(synth);
  });

  return Corpus{corpus.name + ".ssmba", std::move(out)};
}

}  // namespace vforge
