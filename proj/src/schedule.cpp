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
#include "vforge/schedule.hpp"

#include <numeric>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "vforge/error.hpp"
#include "vforge/rng.hpp"

namespace vforge {
namespace {

std::vector<std::size_t> iota_vec(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Anchor order: successive random permutations, so an anchor repeats only
// after every candidate has served.
std::vector<std::size_t> anchor_sequence(const std::vector<std::size_t>& candidates, int iterations, Engine& rng) {
  std::vector<std::size_t> out;
  while (out.size() < static_cast<std::size_t>(iterations)) {
    std::vector<std::size_t> perm = candidates;
    shuffle(perm, rng);
    for (std::size_t a : perm) {
      if (out.size() == static_cast<std::size_t>(iterations)) break;
      out.push_back(a);
    }
  }
  return out;
}

void require_iterations(int iterations) {
  if (iterations < 1) throw DataError("iterations must be at least 1");
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::MixupDisjoint:
      return "MIXUP_DISJOINT";
    case Regime::MixagAnchor:
      return "MIXAG_ANCHOR";
    case Regime::Multilingual:
      return "MULTILINGUAL";
    case Regime::NearestNeighbor:
      return "NEAREST_NEIGHBOR";
  }
  return "?";
}

std::size_t mixup_capacity(std::size_t n) {
  if (n < 2) return 0;
  return n % 2 == 0 ? n - 1 : n;
}

std::vector<PairSchedule> mixup_schedule(std::size_t n, int iterations, std::uint64_t seed) {
  if (n < 2) throw DataError("mixup schedule needs at least 2 instances");
  require_iterations(iterations);
  const std::size_t capacity = mixup_capacity(n);
  if (static_cast<std::size_t>(iterations) > capacity)
    throw ExhaustedPairs("mixup: " + std::to_string(iterations) + " iterations requested but only " +
                         std::to_string(capacity) + " disjoint matchings exist for n=" + std::to_string(n));

  Engine rng = substream(seed, "schedule-mixup");
  // Round-robin over m vertices: vertex m-1 is fixed, the rest rotate. For
  // odd n the fixed vertex is a dummy and its partner sits the round out.
  const std::size_t m = n % 2 == 0 ? n : n + 1;
  const std::size_t ring = m - 1;
  std::vector<std::size_t> label = iota_vec(n);
  shuffle(label, rng);
  std::vector<std::size_t> rounds = iota_vec(ring);
  shuffle(rounds, rng);

  std::vector<PairSchedule> out;
  for (int it = 0; it < iterations; ++it) {
    const std::size_t r = rounds[static_cast<std::size_t>(it)];
    std::vector<IndexPair> pairs;
    if (m - 1 < n) pairs.emplace_back(label[m - 1], label[r]);
    for (std::size_t k = 1; k < m / 2; ++k) {
      const std::size_t a = (r + k) % ring;
      const std::size_t b = (r + ring - k) % ring;
      pairs.emplace_back(label[a], label[b]);
    }
    shuffle(pairs, rng);
    for (auto& p : pairs)
      if (uniform_index(rng, 2) == 1) std::swap(p.first, p.second);
    out.push_back(PairSchedule{std::move(pairs), it + 1, Regime::MixupDisjoint, seed});
  }
  return out;
}

PairSchedule mixag_pairs_for_anchor(std::size_t n, std::size_t anchor, int iteration) {
  if (n < 2) throw DataError("mixag schedule needs at least 2 instances");
  if (anchor >= n) throw DataError("anchor " + std::to_string(anchor) + " out of range");
  PairSchedule s;
  s.iteration = iteration;
  s.regime = Regime::MixagAnchor;
  for (std::size_t j = 0; j < n; ++j)
    if (j != anchor) s.pairs.emplace_back(anchor, j);
  return s;
}

std::vector<PairSchedule> mixag_schedule(std::size_t n, std::uint64_t anchor_seed, int iterations) {
  if (n < 2) throw DataError("mixag schedule needs at least 2 instances");
  require_iterations(iterations);
  Engine rng = substream(anchor_seed, "schedule-mixag");
  std::vector<PairSchedule> out;
  const auto anchors = anchor_sequence(iota_vec(n), iterations, rng);
  for (int it = 0; it < iterations; ++it) {
    PairSchedule s = mixag_pairs_for_anchor(n, anchors[static_cast<std::size_t>(it)], it + 1);
    s.seed = anchor_seed;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<PairSchedule> multilingual_schedule(const std::vector<std::size_t>& anchors, std::size_t pool_size,
                                                int iterations, std::uint64_t seed) {
  if (pool_size < 2) throw DataError("multilingual pool needs at least 2 instances");
  if (anchors.empty()) throw DataError("multilingual schedule needs a nonempty target");
  require_iterations(iterations);
  for (std::size_t a : anchors)
    if (a >= pool_size) throw DataError("anchor " + std::to_string(a) + " is outside the pool");

  Engine rng = substream(seed, "schedule-multilingual");
  std::unordered_map<std::size_t, std::set<std::size_t>> used;
  std::vector<PairSchedule> out;
  for (int it = 0; it < iterations; ++it) {
    PairSchedule s;
    s.iteration = it + 1;
    s.regime = Regime::Multilingual;
    s.seed = seed;
    for (std::size_t a : anchors) {
      auto& taken = used[a];
      std::vector<std::size_t> candidates;
      candidates.reserve(pool_size);
      for (std::size_t j = 0; j < pool_size; ++j)
        if (j != a && !taken.count(j)) candidates.push_back(j);
      if (candidates.empty())
        throw ExhaustedPairs("multilingual: anchor " + std::to_string(a) + " has no unused partner left");
      const std::size_t partner = candidates[uniform_index(rng, candidates.size())];
      taken.insert(partner);
      s.pairs.emplace_back(a, partner);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::size_t> anchor_positions(const Corpus& target, const Corpus& pool) {
  std::unordered_map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < pool.size(); ++i) where.emplace(pool[i].id, i);
  std::vector<std::size_t> anchors;
  anchors.reserve(target.size());
  for (const Instance& inst : target.instances) {
    auto it = where.find(inst.id);
    if (it == where.end()) throw DataError("target instance '" + inst.id + "' is not in the pool");
    anchors.push_back(it->second);
  }
  return anchors;
}

std::vector<PairSchedule> multilingual_schedule(const Corpus& target, const Corpus& pool, int iterations,
                                                std::uint64_t seed) {
  if (pool.size() < 2) throw DataError("multilingual pool needs at least 2 instances");
  return multilingual_schedule(anchor_positions(target, pool), pool.size(), iterations, seed);
}

std::vector<PairSchedule> multilingual_mixag_schedule(const std::vector<std::size_t>& anchors,
                                                      std::size_t pool_size, int iterations, std::uint64_t seed) {
  if (pool_size < 2) throw DataError("multilingual pool needs at least 2 instances");
  if (anchors.empty()) throw DataError("multilingual schedule needs a nonempty target");
  require_iterations(iterations);
  Engine rng = substream(seed, "schedule-multilingual-mixag");
  const auto order = anchor_sequence(anchors, iterations, rng);
  std::vector<PairSchedule> out;
  for (int it = 0; it < iterations; ++it) {
    PairSchedule s = mixag_pairs_for_anchor(pool_size, order[static_cast<std::size_t>(it)], it + 1);
    s.regime = Regime::Multilingual;
    s.seed = seed;
    out.push_back(std::move(s));
  }
  return out;
}

PairSchedule nn_schedule(const std::vector<VectorSequence>& sequences, std::size_t k_pairs) {
  if (sequences.size() < 2) throw DataError("nearest-neighbour schedule needs at least 2 sequences");
  std::vector<Vector> means;
  means.reserve(sequences.size());
  for (const VectorSequence& s : sequences) {
    if (s.dimension != sequences.front().dimension) throw DimensionMismatch("sequences differ in dimension");
    means.push_back(mean_pool(s));
  }
  PairSchedule out;
  out.regime = Regime::NearestNeighbor;
  const std::size_t k = std::min(k_pairs, sequences.size());
  for (std::size_t i = 0; i < k; ++i) out.pairs.emplace_back(i, nearest_neighbor_pooled(means[i], means, i));
  return out;
}

std::string to_json(const PairSchedule& schedule) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [a, b] : schedule.pairs) pairs.push_back({a, b});
  nlohmann::json j = {{"regime", std::string(to_string(schedule.regime))},
                      {"iteration", schedule.iteration},
                      {"pairs", pairs},
                      {"seed", schedule.seed}};
  return j.dump();
}

PairSchedule schedule_from_json(std::string_view text) {
  PairSchedule s;
  try {
    auto j = nlohmann::json::parse(text);
    const std::string regime = j.at("regime").get<std::string>();
    if (regime == "MIXUP_DISJOINT") {
      s.regime = Regime::MixupDisjoint;
    } else if (regime == "MIXAG_ANCHOR") {
      s.regime = Regime::MixagAnchor;
    } else if (regime == "MULTILINGUAL") {
      s.regime = Regime::Multilingual;
    } else if (regime == "NEAREST_NEIGHBOR") {
      s.regime = Regime::NearestNeighbor;
    } else {
      throw DataError("unknown regime '" + regime + "'");
    }
    s.iteration = j.at("iteration").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& p : j.at("pairs")) s.pairs.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed schedule JSON: ") + e.what());
  }
  return s;
}

}  // namespace vforge
