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
#ifndef VFORGE_CORPUS_HPP
#define VFORGE_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vforge {

enum class Domain { GAO, TRAC, WUL };

std::string_view to_string(Domain d);
Domain parse_domain(std::string_view tag);

/// Where a synthetic instance came from. Absent on original texts.
struct Provenance {
  std::string method;
  std::vector<std::string> parents;
  std::optional<double> lambda;

  bool operator==(const Provenance&) const = default;
};

struct Instance {
  std::string id;
  std::vector<std::string> tokens;
  std::optional<int> label;  // 1 = abusive
  std::string language;
  Domain domain = Domain::GAO;
  std::optional<Provenance> provenance;

  bool operator==(const Instance&) const = default;
};

struct Corpus {
  std::string name;
  std::vector<Instance> instances;

  std::size_t size() const noexcept { return instances.size(); }
  bool empty() const noexcept { return instances.empty(); }
  const Instance& operator[](std::size_t i) const { return instances[i]; }

  bool operator==(const Corpus&) const = default;
};

struct SplitSpec {
  double few_shot_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct LoadOptions {
  /// Reject objects carrying keys outside the corpus schema.
  bool strict_schema = false;
  /// Require every line to carry a label.
  bool require_labels = false;
};

/// Checks the Instance invariants (nonempty tokens, binary label).
void validate(const Instance& inst);

Corpus load_corpus(const std::filesystem::path& path, const LoadOptions& options = {});
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// One JSONL line for `inst`, without the trailing newline.
std::string to_jsonl(const Instance& inst);
/// Parses one JSONL line; `where`/`line` only label errors.
Instance parse_instance(std::string_view line_text, const std::string& where, std::size_t line,
                        const LoadOptions& options = {});

/// round(x) with halves rounded up.
std::size_t round_half_up(double x);

/// Draws `round(fraction * n)` instances from every (language, domain)
/// stratum and pools them. Both halves keep corpus order.
std::pair<Corpus, Corpus> split_few_shot(const Corpus& corpus, const SplitSpec& spec);

Corpus filter(const Corpus& corpus, const std::optional<std::string>& language = std::nullopt,
              const std::optional<Domain>& domain = std::nullopt);

/// Concatenation in argument order; ids must stay unique.
Corpus concat(const std::vector<Corpus>& parts, std::string name);

}  // namespace vforge

#endif  // VFORGE_CORPUS_HPP
