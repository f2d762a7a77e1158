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

#include <map>
#include <set>

#include "fixtures.hpp"
#include "vforge/corpus.hpp"
#include "vforge/error.hpp"

using namespace vforge;
using vforge::testing::TempDir;
using vforge::testing::make_all_corpus;
using vforge::testing::make_instance;
using vforge::testing::write_file;

namespace {

std::map<Domain, std::size_t> domain_counts(const Corpus& c) {
  std::map<Domain, std::size_t> out;
  for (const Instance& i : c.instances) ++out[i.domain];
  return out;
}

}  // namespace

TEST_CASE("load_corpus keeps file order") {
  TempDir dir;
  write_file(dir / "c.jsonl",
             R"({"id":"a","tokens":["x","y"],"label":1,"language":"en","domain":"GAO"})" "\n"
             R"({"id":"b","text":"hello  big world","label":0,"language":"de","domain":"TRAC"})" "\n"
             R"({"id":"c","tokens":["z"],"language":"sq","domain":"WUL"})" "\n");
  const Corpus c = load_corpus(dir / "c.jsonl");
  REQUIRE(c.size() == 3);
  CHECK(c[0].id == "a");
  CHECK(c[1].id == "b");
  CHECK(c[2].id == "c");
  CHECK(c[1].tokens == std::vector<std::string>{"hello", "big", "world"});
  CHECK(c[1].domain == Domain::TRAC);
  CHECK_FALSE(c[2].label.has_value());
  CHECK(c.name == "c");
}

TEST_CASE("load_corpus errors name the offending line") {
  TempDir dir;
  const std::string ok = R"({"id":"t0","tokens":["x"],"label":0,"language":"en","domain":"GAO"})";

  SUBCASE("duplicate id is reported on its second occurrence") {
    std::string text = ok + "\n" + R"({"id":"t1","tokens":["x"],"label":0,"language":"en","domain":"GAO"})" + "\n";
    text += R"({"id":"t2","tokens":["x"],"label":0,"language":"en","domain":"GAO"})" "\n";
    text += R"({"id":"t3","tokens":["x"],"label":0,"language":"en","domain":"GAO"})" "\n";
    text += R"({"id":"t1","tokens":["y"],"label":1,"language":"en","domain":"GAO"})" "\n";
    write_file(dir / "dup.jsonl", text);
    try {
      load_corpus(dir / "dup.jsonl");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
      CHECK(std::string(e.what()).find("t1") != std::string::npos);
    }
  }
  SUBCASE("malformed JSON") {
    write_file(dir / "bad.jsonl", ok + "\n{not json\n");
    try {
      load_corpus(dir / "bad.jsonl");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("unknown domain") {
    write_file(dir / "dom.jsonl", R"({"id":"a","tokens":["x"],"label":0,"language":"en","domain":"REDDIT"})" "\n");
    CHECK_THROWS_AS(load_corpus(dir / "dom.jsonl"), ParseError);
  }
  SUBCASE("non-binary label and empty tokens") {
    write_file(dir / "lab.jsonl", R"({"id":"a","tokens":["x"],"label":2,"language":"en","domain":"GAO"})" "\n");
    CHECK_THROWS_AS(load_corpus(dir / "lab.jsonl"), ParseError);
    write_file(dir / "emp.jsonl", R"({"id":"a","tokens":[],"label":0,"language":"en","domain":"GAO"})" "\n");
    CHECK_THROWS_AS(load_corpus(dir / "emp.jsonl"), ParseError);
  }
  SUBCASE("strict schema rejects unknown keys") {
    write_file(dir / "x.jsonl", R"({"id":"a","tokens":["x"],"language":"en","domain":"GAO","extra":1})" "\n");
    CHECK_NOTHROW(load_corpus(dir / "x.jsonl"));
    CHECK_THROWS_AS(load_corpus(dir / "x.jsonl", {true, false}), ParseError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_corpus(dir / "nope.jsonl"), IoError); }
}

TEST_CASE("ALL-style corpus has 99/300/600 instances per domain") {
  TempDir dir;
  save_corpus(make_all_corpus(), dir / "all.jsonl");
  const Corpus c = load_corpus(dir / "all.jsonl");
  CHECK(c.size() == 999);
  const auto counts = domain_counts(c);
  CHECK(counts.at(Domain::GAO) == 99);
  CHECK(counts.at(Domain::TRAC) == 300);
  CHECK(counts.at(Domain::WUL) == 600);
}

TEST_CASE("round_half_up") {
  CHECK(round_half_up(0.1 * 99) == 10);
  CHECK(round_half_up(0.1 * 300) == 30);
  CHECK(round_half_up(0.1 * 5) == 1);
  CHECK(round_half_up(2.5) == 3);
  CHECK(round_half_up(2.4999) == 2);
}

TEST_CASE("split_few_shot reproduces the 10% split sizes") {
  const Corpus all = make_all_corpus();

  SUBCASE("GAO alone: 10 / 89") {
    auto [few, eval] = split_few_shot(filter(all, std::nullopt, Domain::GAO), {0.1, 3});
    CHECK(few.size() == 10);
    CHECK(eval.size() == 89);
  }
  SUBCASE("ALL: 100 / 899, stratified 10/30/60") {
    auto [few, eval] = split_few_shot(all, {0.1, 3});
    CHECK(few.size() == 100);
    CHECK(eval.size() == 899);
    const auto counts = domain_counts(few);
    CHECK(counts.at(Domain::GAO) == 10);
    CHECK(counts.at(Domain::TRAC) == 30);
    CHECK(counts.at(Domain::WUL) == 60);
  }
  SUBCASE("same seed twice gives identical splits, different seed differs") {
    CHECK(split_few_shot(all, {0.1, 11}) == split_few_shot(all, {0.1, 11}));
    CHECK_FALSE(split_few_shot(all, {0.1, 11}).first == split_few_shot(all, {0.1, 12}).first);
  }
  SUBCASE("too small a stratum is an error") {
    Corpus tiny{"tiny", {make_instance("a", {"x"}, 0), make_instance("b", {"x"}, 1)}};
    CHECK_THROWS_AS(split_few_shot(tiny, {0.1, 0}), DataError);
  }
  SUBCASE("fraction must lie in (0, 1)") {
    CHECK_THROWS_AS(split_few_shot(all, {0.0, 0}), DataError);
    CHECK_THROWS_AS(split_few_shot(all, {1.0, 0}), DataError);
  }
  SUBCASE("unlabeled instances are rejected") {
    Corpus c = all;
    c.instances[5].label.reset();
    CHECK_THROWS_AS(split_few_shot(c, {0.1, 0}), DataError);
  }
}

TEST_CASE("split is a partition for 1000 seeds") {
  const Corpus all = make_all_corpus();
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto [few, eval] = split_few_shot(all, {0.1, seed});
    std::set<std::string> a;
    std::set<std::string> b;
    for (const auto& i : few.instances) a.insert(i.id);
    for (const auto& i : eval.instances) b.insert(i.id);
    bool disjoint = true;
    for (const auto& id : a) disjoint = disjoint && !b.count(id);
    REQUIRE(disjoint);
    REQUIRE(a.size() + b.size() == all.size());
    const auto counts = domain_counts(few);
    REQUIRE(counts.at(Domain::GAO) == 10);
    REQUIRE(counts.at(Domain::TRAC) == 30);
    REQUIRE(counts.at(Domain::WUL) == 60);
  }
}

TEST_CASE("filter") {
  const Corpus all = make_all_corpus();
  CHECK(filter(all, std::nullopt, Domain::TRAC).size() == 300);
  CHECK(filter(all, std::string("xx")).empty());
  CHECK(filter(all) == all);
  const Corpus en_wul = filter(all, std::string("en"), Domain::WUL);
  CHECK(en_wul.size() == 600);
  CHECK(en_wul[0].id == "en-399");
}

TEST_CASE("concat keeps order and rejects duplicate ids") {
  const Corpus all = make_all_corpus();
  const Corpus joined =
      concat({filter(all, std::nullopt, Domain::GAO), filter(all, std::nullopt, Domain::TRAC),
              filter(all, std::nullopt, Domain::WUL)},
             all.name);
  CHECK(joined == all);
  CHECK_THROWS_AS(concat({all, all}, "x"), DataError);
}

TEST_CASE("save/load round trip") {
  TempDir dir;
  Corpus c{"rt",
           {make_instance("a", {"ü", "\"quoted\"", "x"}, 1, "de", Domain::WUL),
            make_instance("b", {"y"}, 0, "hr", Domain::TRAC), make_instance("c", {"z", "z"}, 1, "ru")}};
  c.instances[2].label.reset();
  c.instances[1].provenance = Provenance{"MIXAG", {"a", "c"}, 0.1234567890123456789};
  save_corpus(c, dir / "rt.jsonl");
  CHECK(load_corpus(dir / "rt.jsonl") == c);

  CHECK_THROWS_AS(save_corpus(c, dir / "missing-dir" / "x.jsonl"), IoError);
}

TEST_CASE("round trip property over generated corpora") {
  TempDir dir;
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Corpus c{"p", {}};
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> toks;
      const int len = 1 + static_cast<int>(rng() % 6);
      for (int t = 0; t < len; ++t) toks.push_back("tok" + std::to_string(rng() % 100));
      Instance inst = make_instance("i" + std::to_string(i), toks, static_cast<int>(rng() % 2),
                                    rng() % 2 ? "en" : "tr", static_cast<Domain>(rng() % 3));
      if (rng() % 4 == 0) inst.provenance = Provenance{"MIXUP", {"p", "q"}, std::ldexp(double(rng() >> 11), -53)};
      c.instances.push_back(std::move(inst));
    }
    save_corpus(c, dir / "p.jsonl");
    REQUIRE(load_corpus(dir / "p.jsonl") == c);
  }
}
