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
#ifndef VFORGE_SCHEDULE_HPP
#define VFORGE_SCHEDULE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vforge/corpus.hpp"
#include "vforge/embedding.hpp"

namespace vforge {

enum class Regime { MixupDisjoint, MixagAnchor, Multilingual, NearestNeighbor };
std::string_view to_string(Regime r);

using IndexPair = std::pair<std::size_t, std::size_t>;  // (anchor, partner)

struct PairSchedule {
  std::vector<IndexPair> pairs;
  int iteration = 1;
  Regime regime = Regime::MixupDisjoint;
  std::uint64_t seed = 0;

  bool operator==(const PairSchedule&) const = default;
};

/// Iterations available before some unordered pair would repeat: n - 1 for
/// even n, n for odd n.
std::size_t mixup_capacity(std::size_t n);

/// One vertex-disjoint matching of floor(n/2) pairs per iteration. The
/// matchings come from a randomly relabelled round-robin factorization of
/// K_n, so no unordered pair repeats; for odd n the unmatched instance
/// changes every iteration. Throws ExhaustedPairs past mixup_capacity(n).
std::vector<PairSchedule> mixup_schedule(std::size_t n, int iterations, std::uint64_t seed);

/// All n - 1 pairs (anchor, j), j != anchor, in ascending j.
PairSchedule mixag_pairs_for_anchor(std::size_t n, std::size_t anchor, int iteration = 1);

/// One random anchor per iteration paired with every other instance.
/// Anchors do not repeat until every instance has served once.
std::vector<PairSchedule> mixag_schedule(std::size_t n, std::uint64_t anchor_seed, int iterations);

/// Each anchor (an index into the pool) gets one partner per iteration,
/// drawn uniformly from the rest of the pool; an ordered (anchor, partner)
/// pair is never drawn twice.
std::vector<PairSchedule> multilingual_schedule(const std::vector<std::size_t>& anchors, std::size_t pool_size,
                                                int iterations, std::uint64_t seed);
/// Anchors are the pool positions of `target`'s instances, matched by id.
std::vector<PairSchedule> multilingual_schedule(const Corpus& target, const Corpus& pool, int iterations,
                                                std::uint64_t seed);

/// MIXAG over a multilingual pool: one anchor per iteration drawn from
/// `anchors`, paired with every other pool instance.
std::vector<PairSchedule> multilingual_mixag_schedule(const std::vector<std::size_t>& anchors,
                                                      std::size_t pool_size, int iterations, std::uint64_t seed);

/// Pool positions of `target`'s instances; throws if one is missing.
std::vector<std::size_t> anchor_positions(const Corpus& target, const Corpus& pool);

/// The first k_pairs instances in order, each paired with its nearest
/// neighbour (mean-pooled cosine) among the others.
PairSchedule nn_schedule(const std::vector<VectorSequence>& sequences, std::size_t k_pairs);

/// {"regime": .., "iteration": .., "pairs": [[i, j], ..], "seed": ..}
std::string to_json(const PairSchedule& schedule);
PairSchedule schedule_from_json(std::string_view text);

}  // namespace vforge

#endif  // VFORGE_SCHEDULE_HPP
