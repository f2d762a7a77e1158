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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "fixtures.hpp"
#include "vforge/error.hpp"
#include "vforge/pipeline.hpp"

using namespace vforge;
using vforge::testing::TempDir;
using vforge::testing::make_all_corpus;
using vforge::testing::make_instance;
using vforge::testing::random_table;
using vforge::testing::read_file;
using vforge::testing::write_file;

namespace {

// n instances over a random table, tokens drawn so no two texts coincide.
Corpus random_corpus(std::size_t n, const std::string& lang, Domain domain, unsigned seed, std::size_t vocab = 60) {
  std::mt19937_64 rng(seed);
  Corpus c{lang + "-" + std::string(to_string(domain)), {}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> toks;
    for (std::size_t k = 0; k < 1 + rng() % 4; ++k) toks.push_back("t" + std::to_string(rng() % vocab));
    c.instances.push_back(make_instance(lang + "-" + std::string(to_string(domain)) + "-" + std::to_string(i), toks,
                                        static_cast<int>(i % 2), lang, domain));
  }
  return c;
}

struct Workspace {
  TempDir dir;
  std::filesystem::path corpus = dir / "train.jsonl";
  std::filesystem::path embeddings = dir / "emb.txt";

  explicit Workspace(const Corpus& c, std::size_t vocab = 60) {
    save_corpus(c, corpus);
    save_embeddings(random_table(vocab, 8, 5), embeddings);
  }

  RunConfig config(AugmentMethod m, const std::string& out = "out.jsonl") const {
    RunConfig cfg;
    cfg.method = m;
    cfg.corpus = corpus;
    cfg.embeddings = embeddings;
    cfg.out = dir / out;
    cfg.seed = 13;
    return cfg;
  }
};

}  // namespace

TEST_CASE("MIXAG on ten instances yields nine") {
  Workspace ws(random_corpus(10, "en", Domain::GAO, 1));
  const AugmentResult r = run_augment(ws.config(AugmentMethod::Mixag));
  CHECK(r.mixed_generated == 9);
  CHECK(r.skipped_pairs == 0);
  CHECK(load_corpus(r.corpus_path).size() == 9);

  // All nine share the anchor and carry lambda in provenance.
  std::set<std::string> anchors;
  for (const Instance& s : r.synthetic.instances) {
    REQUIRE(s.provenance.has_value());
    CHECK(s.provenance->method == "MIXAG");
    CHECK(s.provenance->lambda.has_value());
    CHECK(*s.provenance->lambda > 0.0);
    anchors.insert(s.provenance->parents[0]);
  }
  CHECK(anchors.size() == 1);
}

TEST_CASE("MIXUP on thirty instances over two iterations yields thirty") {
  Workspace ws(random_corpus(30, "en", Domain::TRAC, 2));
  RunConfig cfg = ws.config(AugmentMethod::Mixup);
  cfg.iterations = 2;
  const AugmentResult r = run_augment(cfg);
  CHECK(r.mixed_generated == 30);
  const auto manifest = nlohmann::json::parse(read_file(r.manifest_path));
  CHECK(manifest["counts"]["mixed"] == 30);
  CHECK(manifest["groups"][0]["iterations"][0]["pairs"] == 15);
  CHECK(manifest["groups"][0]["iterations"][1]["pairs"] == 15);
  CHECK(manifest["schedules"] == 2);
  for (const Instance& s : r.synthetic.instances) {
    CHECK(*s.provenance->lambda >= 0.0);
    CHECK(*s.provenance->lambda <= 1.0);
  }
}

TEST_CASE("per-domain scope keeps domains apart, ALL pools them") {
  const Corpus c = concat({random_corpus(10, "en", Domain::GAO, 3), random_corpus(30, "en", Domain::TRAC, 4)}, "c");
  Workspace ws(c);
  const AugmentResult per = run_augment(ws.config(AugmentMethod::Mixag));
  CHECK(per.mixed_generated + per.skipped_pairs == 9 + 29);
  for (const Instance& s : per.synthetic.instances) {
    const auto& parents = s.provenance->parents;
    CHECK(parents[0].substr(0, 6) == parents[1].substr(0, 6));
  }
  RunConfig all = ws.config(AugmentMethod::Mixag, "all.jsonl");
  all.scope = Scope::All;
  const AugmentResult pooled = run_augment(all);
  CHECK(pooled.mixed_generated + pooled.skipped_pairs == 39);
}

TEST_CASE("multilingual regime draws anchors from the target language") {
  const Corpus c = concat({random_corpus(10, "de", Domain::GAO, 5), random_corpus(10, "en", Domain::GAO, 6),
                           random_corpus(10, "tr", Domain::GAO, 7)},
                          "multi");
  Workspace ws(c);
  RunConfig cfg = ws.config(AugmentMethod::Mixup);
  cfg.regime = LanguageRegime::Multilingual;
  cfg.target_language = "de";
  cfg.iterations = 3;
  const AugmentResult r = run_augment(cfg);
  CHECK(r.mixed_generated == 30);
  std::set<std::string> partner_langs;
  for (const Instance& s : r.synthetic.instances) {
    CHECK(s.language == "de");
    CHECK(s.provenance->parents[0].substr(0, 2) == "de");
    partner_langs.insert(s.provenance->parents[1].substr(0, 2));
  }
  CHECK(partner_langs.size() > 1);

  RunConfig ag = ws.config(AugmentMethod::Mixag, "ag.jsonl");
  ag.regime = LanguageRegime::Multilingual;
  ag.target_language = "de";
  const AugmentResult a = run_augment(ag);
  CHECK(a.mixed_generated + a.skipped_pairs == 29);
}

TEST_CASE("chained SSMBA feeds the mixer") {
  Workspace ws(random_corpus(10, "en", Domain::GAO, 8));
  RunConfig cfg = ws.config(AugmentMethod::SsmbaThenMixag);
  const AugmentResult r = run_augment(cfg);
  CHECK(r.ssmba_generated == 10);
  // Base is 10 originals + 10 SSMBA variants, so one anchor meets 19 partners.
  CHECK(r.mixed_generated + r.skipped_pairs == 19);
  CHECK(r.synthetic.size() == r.ssmba_generated + r.mixed_generated);

  RunConfig plain = ws.config(AugmentMethod::Ssmba, "ssmba.jsonl");
  plain.ssmba_rounds = 3;
  const AugmentResult s = run_augment(plain);
  CHECK(s.ssmba_generated == 30);
  CHECK(s.mixed_generated == 0);
}

TEST_CASE("lexicon SSMBA through run_augment") {
  Workspace ws(random_corpus(10, "en", Domain::GAO, 9));
  write_file(ws.dir / "lex.txt", "T1\nt2\n");
  RunConfig cfg = ws.config(AugmentMethod::Ssmba);
  cfg.mask = MaskStrategy::Lexicon;
  CHECK_THROWS_AS(run_augment(cfg), DataError);
  cfg.lexicon = ws.dir / "lex.txt";
  const AugmentResult r = run_augment(cfg);
  CHECK(r.ssmba_generated == 10);
  const auto manifest = nlohmann::json::parse(read_file(r.manifest_path));
  CHECK(manifest["inputs"].contains("lexicon"));
}

TEST_CASE("identical config is byte-identical across runs and thread counts") {
  const Corpus c = concat({random_corpus(10, "de", Domain::GAO, 10), random_corpus(30, "en", Domain::TRAC, 11)}, "d");
  Workspace ws(c);
  for (AugmentMethod m : {AugmentMethod::Mixup, AugmentMethod::Mixag, AugmentMethod::SsmbaThenMixup}) {
    RunConfig cfg = ws.config(m);
    cfg.iterations = 3;
    cfg.threads = 1;
    run_augment(cfg);
    const std::string corpus1 = read_file(cfg.out);
    const std::string manifest1 = read_file(cfg.out.string() + ".manifest.json");
    for (int threads : {1, 4}) {
      cfg.threads = threads;
      run_augment(cfg);
      REQUIRE(read_file(cfg.out) == corpus1);
      REQUIRE(read_file(cfg.out.string() + ".manifest.json") == manifest1);
    }
    cfg.seed = 14;
    run_augment(cfg);
    CHECK(read_file(cfg.out) != corpus1);
  }
}

TEST_CASE("manifest records what is needed to reproduce the run") {
  Workspace ws(random_corpus(10, "en", Domain::GAO, 12));
  const RunConfig cfg = ws.config(AugmentMethod::Mixag);
  const AugmentResult r = run_augment(cfg);
  const auto m = nlohmann::json::parse(read_file(r.manifest_path));
  CHECK(m["seed"] == 13);
  CHECK(m["config"]["method"] == "MIXAG");
  CHECK(m["config"]["theta"] == "half");
  CHECK_FALSE(m["config"].contains("threads"));
  CHECK(m["config_hash"] == sha256_hex(m["config"].dump()));
  CHECK(m["inputs"]["corpus"]["sha256"] == sha256_file(ws.corpus));
  CHECK(m["inputs"]["embeddings"]["sha256"] == sha256_file(ws.embeddings));
  CHECK(m["output"]["sha256"] == sha256_file(cfg.out));
  CHECK(m["schedule_digest"].get<std::string>().size() == 64);
}

TEST_CASE("degenerate pairs are skipped, not fatal") {
  Corpus c{"dup", {make_instance("a", {"t1"}, 1), make_instance("b", {"t1"}, 0), make_instance("c", {"t2"}, 0)}};
  Workspace ws(c);
  RunConfig cfg = ws.config(AugmentMethod::Mixag);
  cfg.iterations = 3;  // every instance anchors once
  const AugmentResult r = run_augment(cfg);
  CHECK(r.skipped_pairs == 2);  // a~b and b~a
  CHECK(r.mixed_generated == 4);
}

TEST_CASE("augment errors") {
  Workspace ws(random_corpus(10, "en", Domain::GAO, 13));
  RunConfig cfg = ws.config(AugmentMethod::Mixag);
  cfg.embeddings = ws.dir / "missing.txt";
  CHECK_THROWS_AS(run_augment(cfg), DataError);
  cfg = ws.config(AugmentMethod::Mixup);
  cfg.iterations = 10;
  CHECK_THROWS_AS(run_augment(cfg), ExhaustedPairs);
  cfg = ws.config(AugmentMethod::Ssmba);
  cfg.reconstructor = ReconstructorKind::Http;
  CHECK_THROWS_AS(run_augment(cfg), DataError);

  Corpus oov{"o", {make_instance("a", {"t1"}, 1), make_instance("b", {"nope"}, 0)}};
  Workspace ow(oov);
  try {
    run_augment(ow.config(AugmentMethod::Mixup));
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("'b'") != std::string::npos);
  }
  RunConfig zero = ow.config(AugmentMethod::Mixup);
  zero.oov = OovPolicy::ZeroVector;
  CHECK(run_augment(zero).mixed_generated == 1);
}

TEST_CASE("run_split writes the few-shot and evaluation files") {
  TempDir dir;
  save_corpus(make_all_corpus(), dir / "all.jsonl");
  const SplitResult r = run_split(dir / "all.jsonl", {0.1, 1}, dir / "splits");
  CHECK(r.few_shot == 100);
  CHECK(r.eval == 899);
  CHECK(r.few_shot_path.filename() == "all.fewshot.jsonl");
  CHECK(load_corpus(r.eval_path).size() == 899);
  const std::string first = read_file(r.few_shot_path);
  run_split(dir / "all.jsonl", {0.1, 1}, dir / "splits");
  CHECK(read_file(r.few_shot_path) == first);

  save_corpus(filter(make_all_corpus(), std::nullopt, Domain::WUL), dir / "wul.jsonl");
  const SplitResult w = run_split(dir / "wul.jsonl", {0.1, 1}, dir / "splits");
  CHECK(w.few_shot == 60);
  CHECK(w.eval == 540);
}

TEST_CASE("dump_schedule") {
  ScheduleDumpOptions o;
  o.regime = "mixup";
  o.n = 30;
  o.iterations = 2;
  const auto lines = dump_schedule(o);
  REQUIRE(lines.size() == 2);
  CHECK(schedule_from_json(lines[0]).pairs.size() == 15);
  o.regime = "mixag";
  o.n = 10;
  CHECK(schedule_from_json(dump_schedule(o)[0]).pairs.size() == 9);
  o.regime = "bogus";
  CHECK_THROWS_AS(dump_schedule(o), DataError);
  o.regime = "multilingual";
  CHECK_THROWS_AS(dump_schedule(o), DataError);
}

TEST_CASE("reports") {
  std::vector<PairedOutcome> o;
  for (int i = 0; i < 10; ++i) o.push_back({"b" + std::to_string(i), 1, 1, 0});
  for (int i = 0; i < 2; ++i) o.push_back({"c" + std::to_string(i), 1, 0, 1});
  const Report mc = report_mcnemar(o, {0.05, 5}, false);
  CHECK(mc.json["p_value"].get<double>() == doctest::Approx(0.0433).epsilon(0.02));
  CHECK(mc.json["alpha_altered"] == 0.01);
  CHECK(mc.json["significant"] == false);
  CHECK(mc.text.find("significant") != std::string::npos);
  CHECK(report_mcnemar(o, {0.05, 1}, false).json["significant"] == true);

  std::vector<PairedOutcome> same = {{"1", 0, 1, 1}, {"2", 1, 0, 0}};
  const Report flip = report_flip(same);
  CHECK(flip.json["neg_degraded_pct"].is_null());
  CHECK(flip.json["pos_gained_pct"] == 0.0);

  const Report pr = report_pr(same);
  CHECK(pr.json["a"]["precision"] == 0.0);
  CHECK(pr.json["a"]["recall"] == 0.0);

  CHECK(report_risk({1, 0, 1, 0}).json["vicinal_risk"] == 0.5);
  CHECK(report_pearson({1, 2, 3, 4, 5}, {2, 1, 4, 3, 5}).json["r"].get<double>() == doctest::Approx(0.8));
}

TEST_CASE("typology report") {
  const std::vector<LanguageVector> vecs = {
      {"en", FeatureSet::SYN, {1, 0, 1}}, {"de", FeatureSet::SYN, {1, 0.2, 0.9}}, {"tr", FeatureSet::SYN, {0, 1, 0.1}},
      {"ru", FeatureSet::SYN, {0.5, 0.5, 0.5}}, {"en", FeatureSet::GEO, {1, 1}},  {"de", FeatureSet::GEO, {1, 0.9}},
      {"tr", FeatureSet::GEO, {0.2, 1}},        {"ru", FeatureSet::GEO, {0.6, 1}}};
  const nlohmann::json scores = {{"de", 0.8}, {"tr", 0.4}, {"ru", 0.6}};
  const Report r = report_typology(vecs, "en", scores, 0.05);
  CHECK(r.json.dump().find("SYN") != std::string::npos);
  CHECK(r.json.dump().find("GEO") != std::string::npos);
  CHECK_FALSE(r.text.empty());
}

TEST_CASE("loss and xy files") {
  TempDir dir;
  write_file(dir / "l.json", "[0, 1, 0.5]");
  write_file(dir / "l.txt", "0 1\n0.5\n");
  CHECK(load_losses(dir / "l.json") == std::vector<double>{0, 1, 0.5});
  CHECK(load_losses(dir / "l.txt") == std::vector<double>{0, 1, 0.5});
  write_file(dir / "bad.txt", "0 x\n");
  CHECK_THROWS_AS(load_losses(dir / "bad.txt"), DataError);
  write_file(dir / "xy.json", R"({"xs":[1,2,3],"ys":[3,2,1]})");
  CHECK(load_xy(dir / "xy.json").second == std::vector<double>{3, 2, 1});
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
