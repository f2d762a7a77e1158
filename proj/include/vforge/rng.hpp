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
#ifndef VFORGE_RNG_HPP
#define VFORGE_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace vforge {

using Engine = std::mt19937_64;

// Named substreams: every random stage derives its own engine from the run
// seed, a stage name and an index, so enabling one stage never shifts the
// draws of another and parallel workers can seed per item.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view stage, std::uint64_t index = 0);

inline Engine substream(std::uint64_t seed, std::string_view stage, std::uint64_t index = 0) {
  return Engine(substream_seed(seed, stage, index));
}

/// Uniform integer in [0, bound).
std::uint64_t uniform_index(Engine& rng, std::uint64_t bound);

/// Uniform real in [0, 1).
double uniform_unit(Engine& rng);

template <typename T>
void shuffle(std::vector<T>& items, Engine& rng) {
  std::shuffle(items.begin(), items.end(), rng);
}

/// Draw from Beta(a, b) as G_a / (G_a + G_b).
double sample_beta(Engine& rng, double a, double b);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace vforge

#endif  // VFORGE_RNG_HPP
