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
#include "vforge/rng.hpp"

namespace vforge {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t substream_seed(std::uint64_t seed, std::string_view stage, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ fnv1a64(stage)) + splitmix64(index + 0x51ed270b27ULL));
}

std::uint64_t uniform_index(Engine& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

double uniform_unit(Engine& rng) { return std::generate_canonical<double, 53>(rng); }

double sample_beta(Engine& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  for (;;) {
    double x = ga(rng);
    double y = gb(rng);
    if (x + y > 0.0) return x / (x + y);
  }
}

}  // namespace vforge
