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
// vforge: split few-shot sets, generate vicinal augmentations and compute
// evaluation statistics.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "vforge/error.hpp"
#include "vforge/pipeline.hpp"

namespace {

using namespace vforge;

void emit(const Report& report, const std::string& out) {
  std::cout << report.text;
  if (out.empty()) {
    std::cout << report.json.dump(2) << '\n';
  } else {
    write_text(out, report.json.dump(2) + "\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vicinity-forge: vicinal data augmentation over embedding tables"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  // Subcommand options live in sections named after the subcommand, e.g.
  // [augment]; command-line flags win over the file.
  app.set_config("--config", "", "TOML file mirroring the flags; flags override it");
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);

  // split
  auto* split = app.add_subcommand("split", "Draw the few-shot / evaluation split of a corpus");
  std::string split_corpus;
  std::string split_out = ".";
  SplitSpec split_spec;
  split->add_option("--corpus", split_corpus, "Labeled corpus (JSONL)")->required();
  split->add_option("--fraction", split_spec.few_shot_fraction, "Few-shot fraction per stratum")
      ->capture_default_str();
  split->add_option("--seed", split_spec.seed, "Random seed")->capture_default_str();
  split->add_option("--out", split_out, "Output directory")->capture_default_str();

  // augment
  auto* aug = app.add_subcommand("augment", "Generate synthetic instances");
  RunConfig cfg;
  std::string method = "MIXAG", regime = "MONOLINGUAL", scope = "PER_DOMAIN", pairing = "random";
  std::string theta = "half", oov = "error", mask = "random", recon = "embedding";
  std::string corpus_path, emb_path, lex_path, out_path;
  aug->add_option("--corpus", corpus_path, "Few-shot corpus (JSONL)")->required();
  aug->add_option("--embeddings", emb_path, "Embedding table (word-vector text format)");
  aug->add_option("--lexicon", lex_path, "Lexicon for lexicon-guided masking");
  aug->add_option("--out", out_path, "Synthetic corpus output (JSONL)")->required();
  aug->add_option("--seed", cfg.seed, "Run seed")->capture_default_str();
  aug->add_option("--method", method, "Augmentation method")
      ->check(CLI::IsMember({"MIXUP", "MIXAG", "SSMBA", "SSMBA_THEN_MIXUP", "SSMBA_THEN_MIXAG"}))
      ->capture_default_str();
  aug->add_option("--regime", regime, "Pairing pool")
      ->check(CLI::IsMember({"MONOLINGUAL", "MULTILINGUAL"}))
      ->capture_default_str();
  aug->add_option("--scope", scope, "Domain scope")->check(CLI::IsMember({"PER_DOMAIN", "ALL"}))->capture_default_str();
  aug->add_option("--pairing", pairing, "Partner selection")->check(CLI::IsMember({"random", "nn"}))->capture_default_str();
  aug->add_option("--iterations", cfg.iterations, "Augmentation iterations")->capture_default_str();
  aug->add_option("--target-language", cfg.target_language, "Only generate for this language");
  aug->add_option("--alpha", cfg.mixup.alpha, "MIXUP Beta(alpha, alpha) shape")->capture_default_str();
  aug->add_option("--theta", theta, "MIXAG angle rule: half | third | fixed:<cos>")->capture_default_str();
  aug->add_option("--oov", oov, "Out-of-vocabulary policy")->check(CLI::IsMember({"error", "zero"}))->capture_default_str();
  aug->add_option("--mask", mask, "SSMBA masking")->check(CLI::IsMember({"random", "lexicon"}))->capture_default_str();
  aug->add_option("--mask-token", cfg.mask_token, "Mask token")->capture_default_str();
  aug->add_option("--rounds", cfg.ssmba_rounds, "SSMBA variants per instance")->capture_default_str();
  aug->add_option("--reconstructor", recon, "SSMBA reconstructor")
      ->check(CLI::IsMember({"embedding", "http"}))
      ->capture_default_str();
  aug->add_option("--reconstructor-url", cfg.reconstructor_url, "External reconstructor endpoint")
      ->envname("VFORGE_RECONSTRUCTOR_URL");
  aug->add_option("--timeout-ms", cfg.reconstructor_timeout_ms, "External reconstructor timeout")->capture_default_str();
  aug->add_option("--context-window", cfg.context_window, "Embedding reconstructor context per side")
      ->capture_default_str();
  aug->add_option("--threads", cfg.threads, "Worker threads (output is identical for any value)")
      ->capture_default_str();

  // stats
  auto* stats = app.add_subcommand("stats", "Evaluation statistics");
  stats->require_subcommand(1);
  std::string stats_out;
  std::string outcomes_path;
  SignificanceConfig sig;
  bool exact = false;
  auto* mc = stats->add_subcommand("mcnemar", "McNemar test with Bonferroni-corrected level");
  mc->add_option("--outcomes", outcomes_path, "Paired-outcome JSONL")->required();
  mc->add_option("--alpha", sig.alpha, "Significance level")->capture_default_str();
  mc->add_option("--comparisons", sig.comparisons, "Number of comparisons (Bonferroni)")->capture_default_str();
  mc->add_flag("--exact", exact, "Exact binomial p-value (for b + c < 25)");
  mc->add_option("--out", stats_out, "JSON report path");

  auto* pe = stats->add_subcommand("pearson", "Pearson correlation");
  std::string xy_path, scores_path, reference = "en";
  std::vector<std::string> vector_paths;
  double pearson_alpha = 0.05;
  pe->add_option("--input", xy_path, "JSON {\"xs\": [...], \"ys\": [...]}");
  pe->add_option("--vectors", vector_paths, "Language-vector JSON files");
  pe->add_option("--reference", reference, "Reference language for similarity")->capture_default_str();
  pe->add_option("--scores", scores_path, "Per-language scores JSON");
  pe->add_option("--alpha", pearson_alpha, "Significance level")->capture_default_str();
  pe->add_option("--out", stats_out, "JSON report path");

  auto* fl = stats->add_subcommand("flip", "Per-class flip rates between two systems");
  fl->add_option("--outcomes", outcomes_path, "Paired-outcome JSONL")->required();
  fl->add_option("--out", stats_out, "JSON report path");

  auto* pr = stats->add_subcommand("pr", "Precision and recall of both systems");
  pr->add_option("--outcomes", outcomes_path, "Paired-outcome JSONL")->required();
  pr->add_option("--out", stats_out, "JSON report path");

  auto* risk = stats->add_subcommand("risk", "Vicinal risk (mean loss)");
  std::string losses_path;
  risk->add_option("--losses", losses_path, "Losses: JSON array or whitespace-separated")->required();
  risk->add_option("--out", stats_out, "JSON report path");

  // schedule dump
  auto* sched = app.add_subcommand("schedule", "Pairing schedules");
  sched->require_subcommand(1);
  auto* dump = sched->add_subcommand("dump", "Print schedules as JSON lines");
  ScheduleDumpOptions dump_opts;
  std::string dump_corpus, dump_emb, dump_out;
  dump->add_option("--regime", dump_opts.regime, "mixup | mixag | multilingual | multilingual-mixag | nn")
      ->check(CLI::IsMember({"mixup", "mixag", "multilingual", "multilingual-mixag", "nn"}))
      ->capture_default_str();
  dump->add_option("--n", dump_opts.n, "Instance count when no corpus is given");
  dump->add_option("--iterations", dump_opts.iterations, "Iterations")->capture_default_str();
  dump->add_option("--seed", dump_opts.seed, "Seed")->capture_default_str();
  dump->add_option("--corpus", dump_corpus, "Corpus (JSONL)");
  dump->add_option("--embeddings", dump_emb, "Embedding table (nn regime)");
  dump->add_option("--target-language", dump_opts.target_language, "Anchor language (multilingual)");
  dump->add_option("--out", dump_out, "Write JSON lines here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (split->parsed()) {
      const SplitResult r = run_split(split_corpus, split_spec, split_out);
      std::cout << r.few_shot_path.string() << "  " << r.few_shot << '\n'
                << r.eval_path.string() << "  " << r.eval << '\n';
    } else if (aug->parsed()) {
      cfg.method = parse_method(method);
      cfg.regime = parse_regime(regime);
      cfg.scope = parse_scope(scope);
      cfg.pairing = parse_pairing(pairing);
      cfg.mixag = parse_theta_rule(theta);
      cfg.oov = oov == "zero" ? OovPolicy::ZeroVector : OovPolicy::Error;
      cfg.mask = mask == "lexicon" ? MaskStrategy::Lexicon : MaskStrategy::RandomOne;
      cfg.reconstructor = recon == "http" ? ReconstructorKind::Http : ReconstructorKind::Embedding;
      cfg.corpus = corpus_path;
      cfg.embeddings = emb_path;
      cfg.lexicon = lex_path;
      cfg.out = out_path;
      const AugmentResult r = run_augment(cfg);
      std::cout << r.corpus_path.string() << "  ssmba=" << r.ssmba_generated << " mixed=" << r.mixed_generated
                << " skipped=" << r.skipped_pairs << '\n'
                << r.manifest_path.string() << '\n';
    } else if (mc->parsed()) {
      emit(report_mcnemar(load_outcomes(outcomes_path), sig, exact), stats_out);
    } else if (pe->parsed()) {
      if (!xy_path.empty()) {
        auto [xs, ys] = load_xy(xy_path);
        emit(report_pearson(xs, ys), stats_out);
      } else if (!vector_paths.empty() && !scores_path.empty()) {
        std::vector<LanguageVector> vectors;
        for (const auto& p : vector_paths) vectors.push_back(load_language_vector(p));
        std::ifstream in(scores_path);
        if (!in) throw IoError("cannot open " + scores_path);
        nlohmann::json scores;
        try {
          scores = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw DataError(scores_path + ": " + e.what());
        }
        emit(report_typology(vectors, reference, scores, pearson_alpha), stats_out);
      } else {
        std::cerr << "pearson needs --input, or --vectors with --scores\n";
        return 1;
      }
    } else if (fl->parsed()) {
      emit(report_flip(load_outcomes(outcomes_path)), stats_out);
    } else if (pr->parsed()) {
      emit(report_pr(load_outcomes(outcomes_path)), stats_out);
    } else if (risk->parsed()) {
      emit(report_risk(load_losses(losses_path)), stats_out);
    } else if (dump->parsed()) {
      dump_opts.corpus = dump_corpus;
      dump_opts.embeddings = dump_emb;
      std::string text;
      for (const auto& line : dump_schedule(dump_opts)) text += line + '\n';
      if (dump_out.empty()) {
        std::cout << text;
      } else {
        write_text(dump_out, text);
      }
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
