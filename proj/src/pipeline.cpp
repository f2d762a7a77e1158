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
#include "vforge/pipeline.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_set>

#include "vforge/error.hpp"
#include "vforge/parallel.hpp"
#include "vforge/rng.hpp"

namespace vforge {
namespace {

using nlohmann::json;

bool has_ssmba(AugmentMethod m) {
  return m == AugmentMethod::Ssmba || m == AugmentMethod::SsmbaThenMixup || m == AugmentMethod::SsmbaThenMixag;
}

bool has_mixer(AugmentMethod m) { return m != AugmentMethod::Ssmba; }

Method mixer_of(AugmentMethod m) {
  return (m == AugmentMethod::Mixup || m == AugmentMethod::SsmbaThenMixup) ? Method::Mixup : Method::Mixag;
}

bool needs_table(const RunConfig& cfg) {
  return has_mixer(cfg.method) || (has_ssmba(cfg.method) && cfg.reconstructor == ReconstructorKind::Embedding);
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fmt_num(const std::optional<double>& v, int precision = 6) {
  if (!v) return "undefined";
  std::ostringstream os;
  os << std::setprecision(precision) << *v;
  return os.str();
}

// Renders rows as left-aligned columns separated by two spaces.
std::string aligned_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream os;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    os << line << '\n';
  }
  return os.str();
}

struct Group {
  std::string key;
  std::vector<std::size_t> pool;     // indices into the mixer input
  std::vector<std::size_t> anchors;  // positions within `pool`
};

std::vector<Group> build_groups(const Corpus& base, const RunConfig& cfg) {
  std::map<std::string, std::vector<std::size_t>> scoped;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const std::string scope_key = cfg.scope == Scope::All ? "ALL" : std::string(to_string(base[i].domain));
    scoped[scope_key].push_back(i);
  }

  std::vector<Group> groups;
  for (const auto& [scope_key, members] : scoped) {
    std::map<std::string, std::vector<std::size_t>> by_lang;  // language -> positions in `members`
    for (std::size_t k = 0; k < members.size(); ++k) by_lang[base[members[k]].language].push_back(k);

    for (const auto& [lang, positions] : by_lang) {
      if (!cfg.target_language.empty() && lang != cfg.target_language) continue;
      Group g;
      g.key = scope_key + "/" + lang;
      if (cfg.regime == LanguageRegime::Monolingual) {
        for (std::size_t k : positions) g.pool.push_back(members[k]);
        for (std::size_t k = 0; k < g.pool.size(); ++k) g.anchors.push_back(k);
      } else {
        g.key += "+multilingual";
        g.pool = members;
        g.anchors = positions;
      }
      groups.push_back(std::move(g));
    }
  }
  return groups;
}

std::vector<PairSchedule> schedules_for(const Group& g, const RunConfig& cfg, Method mixer,
                                        const std::vector<VectorSequence>& encoded) {
  const std::uint64_t gseed = substream_seed(cfg.seed, "schedule:" + g.key);
  const std::size_t n = g.pool.size();
  if (cfg.pairing == Pairing::NearestNeighbor) {
    std::vector<Vector> means;
    means.reserve(n);
    for (std::size_t idx : g.pool) means.push_back(mean_pool(encoded[idx]));
    PairSchedule s;
    s.regime = Regime::NearestNeighbor;
    for (std::size_t a : g.anchors) s.pairs.emplace_back(a, nearest_neighbor_pooled(means[a], means, a));
    return {s};
  }
  if (cfg.regime == LanguageRegime::Monolingual) {
    if (mixer == Method::Mixup) return mixup_schedule(n, cfg.iterations, gseed);
    return mixag_schedule(n, gseed, cfg.iterations);
  }
  if (mixer == Method::Mixup) return multilingual_schedule(g.anchors, n, cfg.iterations, gseed);
  return multilingual_mixag_schedule(g.anchors, n, cfg.iterations, gseed);
}

std::string lower_method(Method m) {
  std::string s(to_string(m));
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

// --- enums ------------------------------------------------------------------

AugmentMethod parse_method(std::string_view s) {
  if (s == "MIXUP") return AugmentMethod::Mixup;
  if (s == "MIXAG") return AugmentMethod::Mixag;
  if (s == "SSMBA") return AugmentMethod::Ssmba;
  if (s == "SSMBA_THEN_MIXUP") return AugmentMethod::SsmbaThenMixup;
  if (s == "SSMBA_THEN_MIXAG") return AugmentMethod::SsmbaThenMixag;
  throw DataError("unknown method '" + std::string(s) + "'");
}

LanguageRegime parse_regime(std::string_view s) {
  if (s == "MONOLINGUAL") return LanguageRegime::Monolingual;
  if (s == "MULTILINGUAL") return LanguageRegime::Multilingual;
  throw DataError("unknown regime '" + std::string(s) + "'");
}

Scope parse_scope(std::string_view s) {
  if (s == "PER_DOMAIN") return Scope::PerDomain;
  if (s == "ALL") return Scope::All;
  throw DataError("unknown scope '" + std::string(s) + "'");
}

Pairing parse_pairing(std::string_view s) {
  if (s == "random") return Pairing::Random;
  if (s == "nn") return Pairing::NearestNeighbor;
  throw DataError("unknown pairing '" + std::string(s) + "'");
}

std::string_view to_string(AugmentMethod m) {
  switch (m) {
    case AugmentMethod::Mixup:
      return "MIXUP";
    case AugmentMethod::Mixag:
      return "MIXAG";
    case AugmentMethod::Ssmba:
      return "SSMBA";
    case AugmentMethod::SsmbaThenMixup:
      return "SSMBA_THEN_MIXUP";
    case AugmentMethod::SsmbaThenMixag:
      return "SSMBA_THEN_MIXAG";
  }
  return "?";
}

std::string_view to_string(LanguageRegime r) { return r == LanguageRegime::Monolingual ? "MONOLINGUAL" : "MULTILINGUAL"; }
std::string_view to_string(Scope s) { return s == Scope::PerDomain ? "PER_DOMAIN" : "ALL"; }
std::string_view to_string(Pairing p) { return p == Pairing::Random ? "random" : "nn"; }

// --- hashing and files -------------------------------------------------------

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw InvariantViolation("SHA-256 computation failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

// --- augment -----------------------------------------------------------------

void validate(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.corpus.empty() || !fs::exists(cfg.corpus)) throw DataError("corpus file not found: " + cfg.corpus.string());
  if (cfg.out.empty()) throw DataError("an output path is required");
  if (needs_table(cfg) && (cfg.embeddings.empty() || !fs::exists(cfg.embeddings)))
    throw DataError("method " + std::string(to_string(cfg.method)) + " needs an embedding table; not found: '" +
                    cfg.embeddings.string() + "'");
  if (has_ssmba(cfg.method) && cfg.mask == MaskStrategy::Lexicon && (cfg.lexicon.empty() || !fs::exists(cfg.lexicon)))
    throw DataError("lexicon masking needs a lexicon file; not found: '" + cfg.lexicon.string() + "'");
  if (has_ssmba(cfg.method) && cfg.reconstructor == ReconstructorKind::Http && cfg.reconstructor_url.empty())
    throw DataError("the http reconstructor needs a URL (--reconstructor-url or VFORGE_RECONSTRUCTOR_URL)");
  if (cfg.iterations < 1) throw DataError("iterations must be at least 1");
  if (cfg.ssmba_rounds < 1) throw DataError("ssmba rounds must be at least 1");
  if (!(cfg.mixup.alpha > 0.0)) throw DataError("mixup alpha must be positive");
  if (cfg.threads < 1) throw DataError("threads must be at least 1");
  if (cfg.context_window < 1) throw DataError("context window must be at least 1");
  if (cfg.reconstructor_timeout_ms < 1) throw DataError("reconstructor timeout must be positive");
}

json to_json(const RunConfig& cfg) {
  json j;
  j["method"] = std::string(to_string(cfg.method));
  j["regime"] = std::string(to_string(cfg.regime));
  j["scope"] = std::string(to_string(cfg.scope));
  j["pairing"] = std::string(to_string(cfg.pairing));
  j["iterations"] = cfg.iterations;
  j["seed"] = cfg.seed;
  j["corpus"] = cfg.corpus.string();
  j["embeddings"] = cfg.embeddings.string();
  j["lexicon"] = cfg.lexicon.string();
  j["out"] = cfg.out.string();
  j["target_language"] = cfg.target_language;
  j["mixup_alpha"] = cfg.mixup.alpha;
  j["theta"] = to_string(cfg.mixag);
  j["oov"] = cfg.oov == OovPolicy::Error ? "error" : "zero";
  j["mask"] = cfg.mask == MaskStrategy::RandomOne ? "random" : "lexicon";
  j["mask_token"] = cfg.mask_token;
  j["ssmba_rounds"] = cfg.ssmba_rounds;
  j["reconstructor"] = cfg.reconstructor == ReconstructorKind::Embedding ? "embedding" : "http";
  j["reconstructor_url"] = cfg.reconstructor_url;
  j["reconstructor_timeout_ms"] = cfg.reconstructor_timeout_ms;
  j["context_window"] = cfg.context_window;
  return j;
}

AugmentOutput augment(const Corpus& corpus, const RunConfig& cfg, const EmbeddingTable* table,
                      const Reconstructor* reconstructor) {
  for (const Instance& inst : corpus.instances)
    if (!inst.label) throw DataError("instance '" + inst.id + "' is unlabeled; augmentation needs labels");

  AugmentOutput out;
  out.synthetic.name = corpus.name + ".augmented";

  Corpus base = corpus;
  if (has_ssmba(cfg.method)) {
    if (reconstructor == nullptr) throw InvariantViolation("SSMBA requested without a reconstructor");
    MaskPolicy policy;
    policy.strategy = cfg.mask;
    policy.mask_token = cfg.mask_token;
    policy.seed = substream_seed(cfg.seed, "ssmba");
    if (cfg.mask == MaskStrategy::Lexicon) policy.lexicon = load_lexicon(cfg.lexicon);
    Corpus generated = ssmba_generate(corpus, policy, *reconstructor, cfg.ssmba_rounds, cfg.threads);
    out.ssmba_generated = generated.size();
    for (const Instance& inst : generated.instances) {
      out.synthetic.instances.push_back(inst);
      base.instances.push_back(inst);
    }
  }

  if (!has_mixer(cfg.method)) return out;
  if (table == nullptr) throw InvariantViolation("mixing requested without an embedding table");
  const Method mixer = mixer_of(cfg.method);

  std::vector<VectorSequence> encoded(base.size());
  parallel_for(base.size(), cfg.threads, [&](std::size_t i) {
    try {
      encoded[i] = encode(base[i], *table, cfg.oov);
    } catch (const DataError& e) {
      throw DataError("instance '" + base[i].id + "': " + e.what());
    }
  });

  struct Job {
    std::size_t group;
    std::size_t schedule;
    int iteration;
    std::size_t anchor;
    std::size_t partner;
  };
  std::vector<Group> groups = build_groups(base, cfg);
  std::vector<std::vector<PairSchedule>> schedules;
  std::vector<Job> jobs;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const Group& g = groups[gi];
    if (g.pool.size() < 2) {
      std::cerr << "warning: group " << g.key << " has fewer than 2 instances; skipped\n";
      schedules.emplace_back();
      continue;
    }
    try {
      schedules.push_back(schedules_for(g, cfg, mixer, encoded));
    } catch (const ExhaustedPairs& e) {
      throw ExhaustedPairs("group " + g.key + ": " + e.what());
    }
    for (std::size_t si = 0; si < schedules.back().size(); ++si) {
      const PairSchedule& s = schedules.back()[si];
      json line = json::parse(to_json(s));
      line["group"] = g.key;
      out.schedule_lines.push_back(line.dump());
      for (const auto& [a, p] : s.pairs) jobs.push_back({gi, si, s.iteration, g.pool[a], g.pool[p]});
    }
  }

  std::vector<std::optional<Instance>> made(jobs.size());
  std::vector<std::string> skip_reason(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    const Instance& xi = base[job.anchor];
    const Instance& xj = base[job.partner];
    SyntheticInstance s;
    try {
      if (mixer == Method::Mixup) {
        Engine rng = substream(cfg.seed, "mixup-lambda", j);
        s = mixup_combine(encoded[job.anchor], *xi.label, encoded[job.partner], *xj.label, cfg.mixup, *table, rng);
      } else {
        s = mixag_combine(encoded[job.anchor], *xi.label, encoded[job.partner], *xj.label, cfg.mixag, *table);
      }
    } catch (const DegenerateAngle& e) {
      skip_reason[j] = e.what();
      return;
    } catch (const OutOfRangeTheta& e) {
      skip_reason[j] = e.what();
      return;
    } catch (const DataError& e) {
      throw DataError("instances '" + xi.id + "', '" + xj.id + "': " + e.what());
    }
    Instance inst;
    inst.id = xi.id + "~" + xj.id + "#" + lower_method(mixer) + std::to_string(job.iteration);
    inst.tokens = std::move(s.tokens);
    inst.label = s.label;
    inst.language = xi.language;
    inst.domain = xi.domain;
    inst.provenance = Provenance{std::string(to_string(mixer)), {xi.id, xj.id}, s.lambda_used};
    made[j] = std::move(inst);
  });

  // Per-group, per-iteration bookkeeping for the manifest.
  std::vector<std::map<int, std::pair<std::size_t, std::size_t>>> tally(groups.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    auto& [generated, skipped] = tally[jobs[j].group][jobs[j].iteration];
    if (made[j]) {
      ++generated;
      out.synthetic.instances.push_back(std::move(*made[j]));
    } else {
      ++skipped;
      std::cerr << "warning: skipped pair " << base[jobs[j].anchor].id << " / " << base[jobs[j].partner].id << ": "
                << skip_reason[j] << '\n';
    }
  }
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    json iters = json::array();
    for (const auto& [it, counts] : tally[gi])
      iters.push_back({{"iteration", it},
                       {"pairs", counts.first + counts.second},
                       {"generated", counts.first},
                       {"skipped", counts.second}});
    out.groups.push_back({{"key", groups[gi].key},
                          {"pool", groups[gi].pool.size()},
                          {"anchors", groups[gi].anchors.size()},
                          {"iterations", iters}});
    for (const auto& [it, counts] : tally[gi]) {
      out.mixed_generated += counts.first;
      out.skipped_pairs += counts.second;
    }
  }

  std::unordered_set<std::string> ids;
  for (const Instance& inst : base.instances) ids.insert(inst.id);
  for (std::size_t k = out.ssmba_generated; k < out.synthetic.size(); ++k)
    if (!ids.insert(out.synthetic[k].id).second)
      throw InvariantViolation("synthetic id collision: '" + out.synthetic[k].id + "'");
  return out;
}

AugmentResult run_augment(const RunConfig& cfg) {
  validate(cfg);
  LoadOptions load;
  load.require_labels = true;
  const Corpus corpus = load_corpus(cfg.corpus, load);

  std::optional<EmbeddingTable> table;
  if (needs_table(cfg)) table.emplace(load_embeddings(cfg.embeddings));

  std::unique_ptr<Reconstructor> reconstructor;
  if (has_ssmba(cfg.method)) {
    if (cfg.reconstructor == ReconstructorKind::Embedding) {
      reconstructor = std::make_unique<EmbeddingReconstructor>(*table, cfg.context_window);
    } else {
      reconstructor = std::make_unique<HttpReconstructor>(cfg.reconstructor_url,
                                                          std::chrono::milliseconds(cfg.reconstructor_timeout_ms));
    }
  }

  AugmentOutput out = augment(corpus, cfg, table ? &*table : nullptr, reconstructor.get());

  if (cfg.out.has_parent_path()) std::filesystem::create_directories(cfg.out.parent_path());
  save_corpus(out.synthetic, cfg.out);

  std::string schedule_blob;
  for (const std::string& line : out.schedule_lines) schedule_blob += line + '\n';

  const json config = to_json(cfg);
  json inputs = {{"corpus", {{"path", cfg.corpus.string()}, {"sha256", sha256_file(cfg.corpus)}}}};
  if (table) inputs["embeddings"] = {{"path", cfg.embeddings.string()}, {"sha256", sha256_file(cfg.embeddings)}};
  if (has_ssmba(cfg.method) && cfg.mask == MaskStrategy::Lexicon)
    inputs["lexicon"] = {{"path", cfg.lexicon.string()}, {"sha256", sha256_file(cfg.lexicon)}};

  json manifest;
  manifest["tool"] = "vicinity-forge";
  manifest["version"] = kVersion;
  manifest["config"] = config;
  manifest["config_hash"] = sha256_hex(config.dump());
  manifest["seed"] = cfg.seed;
  manifest["inputs"] = inputs;
  manifest["schedule_digest"] = sha256_hex(schedule_blob);
  manifest["schedules"] = out.schedule_lines.size();
  manifest["groups"] = out.groups;
  manifest["counts"] = {{"input", corpus.size()},
                        {"ssmba", out.ssmba_generated},
                        {"mixed", out.mixed_generated},
                        {"skipped_pairs", out.skipped_pairs},
                        {"total", out.synthetic.size()}};
  manifest["output"] = {{"path", cfg.out.string()}, {"sha256", sha256_file(cfg.out)}};

  AugmentResult result;
  result.corpus_path = cfg.out;
  result.manifest_path = cfg.out.string() + ".manifest.json";
  write_text(result.manifest_path, manifest.dump(2) + "\n");
  result.ssmba_generated = out.ssmba_generated;
  result.mixed_generated = out.mixed_generated;
  result.skipped_pairs = out.skipped_pairs;
  result.synthetic = std::move(out.synthetic);
  return result;
}

// --- split -------------------------------------------------------------------

SplitResult run_split(const std::filesystem::path& corpus_path, const SplitSpec& spec,
                      const std::filesystem::path& out_dir) {
  LoadOptions load;
  load.require_labels = true;
  const Corpus corpus = load_corpus(corpus_path, load);
  auto [few, eval] = split_few_shot(corpus, spec);
  std::filesystem::create_directories(out_dir);
  SplitResult r;
  const std::string stem = corpus_path.stem().string();
  r.few_shot_path = out_dir / (stem + ".fewshot.jsonl");
  r.eval_path = out_dir / (stem + ".eval.jsonl");
  save_corpus(few, r.few_shot_path);
  save_corpus(eval, r.eval_path);
  r.few_shot = few.size();
  r.eval = eval.size();
  return r;
}

// --- schedule dump -----------------------------------------------------------

std::vector<std::string> dump_schedule(const ScheduleDumpOptions& opts) {
  std::optional<Corpus> corpus;
  if (!opts.corpus.empty()) corpus = load_corpus(opts.corpus);
  const std::size_t n = corpus ? corpus->size() : opts.n;

  std::vector<PairSchedule> schedules;
  if (opts.regime == "mixup") {
    schedules = mixup_schedule(n, opts.iterations, opts.seed);
  } else if (opts.regime == "mixag") {
    schedules = mixag_schedule(n, opts.seed, opts.iterations);
  } else if (opts.regime == "multilingual" || opts.regime == "multilingual-mixag") {
    if (!corpus || opts.target_language.empty())
      throw DataError("multilingual schedules need --corpus and --target-language");
    const Corpus target = filter(*corpus, opts.target_language);
    const auto anchors = anchor_positions(target, *corpus);
    schedules = opts.regime == "multilingual"
                    ? multilingual_schedule(anchors, corpus->size(), opts.iterations, opts.seed)
                    : multilingual_mixag_schedule(anchors, corpus->size(), opts.iterations, opts.seed);
  } else if (opts.regime == "nn") {
    if (!corpus || opts.embeddings.empty()) throw DataError("nn schedules need --corpus and --embeddings");
    const EmbeddingTable table = load_embeddings(opts.embeddings);
    std::vector<VectorSequence> seqs;
    for (const Instance& inst : corpus->instances) seqs.push_back(encode(inst, table, OovPolicy::ZeroVector));
    schedules.push_back(nn_schedule(seqs, seqs.size()));
  } else {
    throw DataError("unknown schedule regime '" + opts.regime + "'");
  }
  std::vector<std::string> lines;
  for (const PairSchedule& s : schedules) lines.push_back(to_json(s));
  return lines;
}

// --- reports -----------------------------------------------------------------

Report report_mcnemar(const std::vector<PairedOutcome>& outcomes, const SignificanceConfig& sig, bool exact) {
  const McnemarResult r = mcnemar(outcomes, exact);
  const double altered = bonferroni(sig);
  const bool significant = r.p_value < altered;
  Report rep;
  rep.json = {{"test", "mcnemar"},
              {"variant", exact ? "exact-binomial" : "chi-square-continuity-corrected"},
              {"n", outcomes.size()},
              {"b", r.b},
              {"c", r.c},
              {"statistic", r.statistic},
              {"p_value", r.p_value},
              {"alpha", sig.alpha},
              {"comparisons", sig.comparisons},
              {"alpha_altered", altered},
              {"significant", significant}};
  rep.text = aligned_table({{"n", std::to_string(outcomes.size())},
                            {"b (A right, B wrong)", std::to_string(r.b)},
                            {"c (A wrong, B right)", std::to_string(r.c)},
                            {"statistic", fmt_num(r.statistic)},
                            {"p-value", fmt_num(r.p_value)},
                            {"alpha_altered", fmt_num(altered)},
                            {"significant", significant ? "yes" : "no"}});
  return rep;
}

Report report_flip(const std::vector<PairedOutcome>& outcomes) {
  const FlipRates f = flip_rates(outcomes);
  Report rep;
  rep.json = {{"test", "flip"},
              {"n", outcomes.size()},
              {"neg_degraded_pct", optional_json(f.neg_degraded_pct)},
              {"pos_gained_pct", optional_json(f.pos_gained_pct)}};
  rep.text = aligned_table({{"negatives degraded (%)", fmt_num(f.neg_degraded_pct)},
                            {"positives gained (%)", fmt_num(f.pos_gained_pct)}});
  return rep;
}

Report report_pr(const std::vector<PairedOutcome>& outcomes) {
  std::vector<int> gold;
  std::vector<int> a;
  std::vector<int> b;
  for (const PairedOutcome& o : outcomes) {
    gold.push_back(o.gold);
    a.push_back(o.pred_a);
    b.push_back(o.pred_b);
  }
  const PrecisionRecall pa = precision_recall(gold, a);
  const PrecisionRecall pb = precision_recall(gold, b);
  Report rep;
  rep.json = {{"test", "pr"},
              {"n", outcomes.size()},
              {"a", {{"precision", optional_json(pa.precision)}, {"recall", optional_json(pa.recall)}}},
              {"b", {{"precision", optional_json(pb.precision)}, {"recall", optional_json(pb.recall)}}}};
  rep.text = aligned_table({{"system", "precision", "recall"},
                            {"a", fmt_num(pa.precision), fmt_num(pa.recall)},
                            {"b", fmt_num(pb.precision), fmt_num(pb.recall)}});
  return rep;
}

Report report_risk(const std::vector<double>& losses) {
  const double risk = vicinal_risk(losses);
  Report rep;
  rep.json = {{"test", "risk"}, {"n", losses.size()}, {"vicinal_risk", risk}};
  rep.text = aligned_table({{"n", std::to_string(losses.size())}, {"vicinal risk", fmt_num(risk)}});
  return rep;
}

Report report_pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const PearsonResult r = pearson(xs, ys);
  Report rep;
  rep.json = {{"test", "pearson"}, {"n", xs.size()}, {"r", r.r}, {"p_value", r.p_value}};
  rep.text = aligned_table({{"n", std::to_string(xs.size())}, {"r", fmt_num(r.r)}, {"p-value", fmt_num(r.p_value)}});
  return rep;
}

Report report_typology(const std::vector<LanguageVector>& vectors, const std::string& reference,
                       const json& scores, double alpha) {
  // Score columns: either {lang: x} or {column: {lang: x}}.
  std::map<std::string, std::map<std::string, double>> columns;
  try {
    for (const auto& [key, value] : scores.items()) {
      if (value.is_number()) {
        columns["score"][key] = value.get<double>();
      } else {
        for (const auto& [lang, x] : value.items()) columns[key][lang] = x.get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed score file: ") + e.what());
  }

  std::map<FeatureSet, std::map<std::string, const LanguageVector*>> by_set;
  for (const LanguageVector& v : vectors) by_set[v.feature_set][v.language] = &v;

  Report rep;
  rep.json = {{"test", "typology"}, {"reference", reference}, {"alpha", alpha}, {"similarity", json::object()},
              {"correlations", json::array()}};
  std::vector<std::vector<std::string>> rows = {{"feature", "column", "n", "r", "p-value", "significant"}};
  for (const auto& [set, langs] : by_set) {
    auto ref = langs.find(reference);
    if (ref == langs.end()) continue;
    std::map<std::string, double> sim;
    for (const auto& [lang, vec] : langs)
      if (lang != reference) sim[lang] = cosine_language_similarity(*vec, *ref->second);
    rep.json["similarity"][std::string(to_string(set))] = sim;

    for (const auto& [column, values] : columns) {
      std::vector<double> xs;
      std::vector<double> ys;
      for (const auto& [lang, s] : sim) {
        auto it = values.find(lang);
        if (it == values.end()) continue;
        xs.push_back(s);
        ys.push_back(it->second);
      }
      json entry = {{"feature_set", std::string(to_string(set))}, {"column", column}, {"n", xs.size()}};
      try {
        const PearsonResult r = pearson(xs, ys);
        entry["r"] = r.r;
        entry["p_value"] = r.p_value;
        entry["significant"] = r.p_value < alpha;
        rows.push_back({std::string(to_string(set)), column, std::to_string(xs.size()), fmt_num(r.r),
                        fmt_num(r.p_value), r.p_value < alpha ? "yes" : "no"});
      } catch (const DataError& e) {
        entry["r"] = nullptr;
        entry["p_value"] = nullptr;
        entry["error"] = e.what();
        rows.push_back({std::string(to_string(set)), column, std::to_string(xs.size()), "undefined", "undefined", "-"});
      }
      rep.json["correlations"].push_back(entry);
    }
  }
  rep.text = aligned_table(rows);
  return rep;
}

std::vector<double> load_losses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open loss file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<double> losses;
  if (first != std::string::npos && text[first] == '[') {
    try {
      losses = json::parse(text).get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw DataError(path.string() + ": " + e.what());
    }
    return losses;
  }
  std::istringstream rows(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(rows, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string f;
    while (fields >> f) {
      try {
        std::size_t used = 0;
        losses.push_back(std::stod(f, &used));
        if (used != f.size()) throw std::invalid_argument(f);
      } catch (const std::exception&) {
        throw ParseError(path.string(), lineno, "bad number '" + f + "'");
      }
    }
  }
  return losses;
}

std::pair<std::vector<double>, std::vector<double>> load_xy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    json j = json::parse(in);
    return {j.at("xs").get<std::vector<double>>(), j.at("ys").get<std::vector<double>>()};
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": expected {\"xs\": [...], \"ys\": [...]}: " + e.what());
  }
}

}  // namespace vforge
