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
#ifndef VFORGE_PIPELINE_HPP
#define VFORGE_PIPELINE_HPP

// Run orchestration behind the command-line tool: split, augment, schedule
// dump and the statistics reports.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vforge/corpus.hpp"
#include "vforge/embedding.hpp"
#include "vforge/schedule.hpp"
#include "vforge/ssmba.hpp"
#include "vforge/stats.hpp"
#include "vforge/vicinal.hpp"

namespace vforge {

inline constexpr const char* kVersion = "0.1.0";

enum class AugmentMethod { Mixup, Mixag, Ssmba, SsmbaThenMixup, SsmbaThenMixag };
enum class LanguageRegime { Monolingual, Multilingual };
enum class Scope { PerDomain, All };
enum class Pairing { Random, NearestNeighbor };
enum class ReconstructorKind { Embedding, Http };

AugmentMethod parse_method(std::string_view s);
LanguageRegime parse_regime(std::string_view s);
Scope parse_scope(std::string_view s);
Pairing parse_pairing(std::string_view s);
std::string_view to_string(AugmentMethod m);
std::string_view to_string(LanguageRegime r);
std::string_view to_string(Scope s);
std::string_view to_string(Pairing p);

struct RunConfig {
  AugmentMethod method = AugmentMethod::Mixag;
  LanguageRegime regime = LanguageRegime::Monolingual;
  Scope scope = Scope::PerDomain;
  Pairing pairing = Pairing::Random;
  int iterations = 1;
  std::uint64_t seed = 0;

  std::filesystem::path corpus;
  std::filesystem::path embeddings;
  std::filesystem::path lexicon;
  std::filesystem::path out;
  /// Restricts anchors to one language; all languages when empty.
  std::string target_language;

  MixupConfig mixup;
  MixagConfig mixag;
  OovPolicy oov = OovPolicy::Error;

  MaskStrategy mask = MaskStrategy::RandomOne;
  std::string mask_token = "[MASK]";
  int ssmba_rounds = 1;
  ReconstructorKind reconstructor = ReconstructorKind::Embedding;
  std::string reconstructor_url;
  int reconstructor_timeout_ms = 30000;
  int context_window = 2;

  /// Worker threads; never affects output.
  int threads = 1;
};

/// Checks file existence and method/sub-config consistency.
void validate(const RunConfig& cfg);
/// Resolved configuration as recorded in the manifest (no thread count).
nlohmann::json to_json(const RunConfig& cfg);

struct AugmentResult {
  std::filesystem::path corpus_path;
  std::filesystem::path manifest_path;
  std::size_t ssmba_generated = 0;
  std::size_t mixed_generated = 0;
  std::size_t skipped_pairs = 0;
  Corpus synthetic;
};

/// Writes the synthetic corpus to cfg.out and its manifest next to it
/// (`<out>.manifest.json`).
AugmentResult run_augment(const RunConfig& cfg);

/// In-memory core of run_augment.
struct AugmentOutput {
  Corpus synthetic;
  nlohmann::json groups = nlohmann::json::array();
  std::vector<std::string> schedule_lines;
  std::size_t ssmba_generated = 0;
  std::size_t mixed_generated = 0;
  std::size_t skipped_pairs = 0;
};
AugmentOutput augment(const Corpus& corpus, const RunConfig& cfg, const EmbeddingTable* table,
                      const Reconstructor* reconstructor);

struct SplitResult {
  std::filesystem::path few_shot_path;
  std::filesystem::path eval_path;
  std::size_t few_shot = 0;
  std::size_t eval = 0;
};

/// Writes `<stem>.fewshot.jsonl` and `<stem>.eval.jsonl` into `out_dir`.
SplitResult run_split(const std::filesystem::path& corpus_path, const SplitSpec& spec,
                      const std::filesystem::path& out_dir);

struct ScheduleDumpOptions {
  std::string regime = "mixup";  // mixup | mixag | multilingual | multilingual-mixag | nn
  std::size_t n = 0;             // used when no corpus is given
  int iterations = 1;
  std::uint64_t seed = 0;
  std::filesystem::path corpus;
  std::filesystem::path embeddings;
  std::string target_language;
};

/// One JSON line per schedule.
std::vector<std::string> dump_schedule(const ScheduleDumpOptions& opts);

/// JSON body plus an aligned plain-text table.
struct Report {
  nlohmann::json json;
  std::string text;
};

Report report_mcnemar(const std::vector<PairedOutcome>& outcomes, const SignificanceConfig& sig, bool exact);
Report report_flip(const std::vector<PairedOutcome>& outcomes);
Report report_pr(const std::vector<PairedOutcome>& outcomes);
Report report_risk(const std::vector<double>& losses);
Report report_pearson(const std::vector<double>& xs, const std::vector<double>& ys);
/// Correlates each language's similarity to `reference` with per-language
/// scores, for every feature set and every score column.
Report report_typology(const std::vector<LanguageVector>& vectors, const std::string& reference,
                       const nlohmann::json& scores, double alpha);

/// Reads losses as a JSON array or whitespace-separated numbers.
std::vector<double> load_losses(const std::filesystem::path& path);
/// Reads {"xs": [...], "ys": [...]}.
std::pair<std::vector<double>, std::vector<double>> load_xy(const std::filesystem::path& path);

/// Hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Writes `text` to `path`, throwing IoError on failure.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace vforge

#endif  // VFORGE_PIPELINE_HPP
