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

#include <thread>

#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"
#include "vforge/error.hpp"
#include "vforge/ssmba.hpp"

using namespace vforge;
using vforge::testing::TempDir;
using vforge::testing::make_all_corpus;
using vforge::testing::make_instance;
using vforge::testing::write_file;

namespace {

MaskPolicy lexicon_policy(std::unordered_set<std::string> words, std::uint64_t seed = 0) {
  MaskPolicy p;
  p.strategy = MaskStrategy::Lexicon;
  p.lexicon = std::move(words);
  p.seed = seed;
  return p;
}

// Stand-in reconstructor: fills every mask with "fill<k>".
class CountingReconstructor final : public Reconstructor {
 public:
  std::vector<std::string> fill(const MaskedText& text) const override {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < text.positions.size(); ++k) out.push_back("fill" + std::to_string(k));
    return out;
  }
  std::string name() const override { return "counting"; }
};

class BadReconstructor final : public Reconstructor {
 public:
  explicit BadReconstructor(std::vector<std::string> fills) : fills_(std::move(fills)) {}
  std::vector<std::string> fill(const MaskedText&) const override { return fills_; }
  std::string name() const override { return "bad"; }

 private:
  std::vector<std::string> fills_;
};

}  // namespace

TEST_CASE("lexicon masking") {
  const Instance hit = make_instance("h", {"you", "are", "stupid"}, 1);
  const Corruption c = corrupt(hit, lexicon_policy({"stupid"}));
  CHECK(c.positions == std::vector<std::size_t>{2});
  CHECK(c.originals == std::vector<std::string>{"stupid"});
  CHECK(c.tokens == std::vector<std::string>{"you", "are", "[MASK]"});

  SUBCASE("case-insensitive match and multiple hits") {
    const Instance multi = make_instance("m", {"Stupid", "and", "IDIOT", "stupid"}, 1);
    CHECK(corrupt(multi, lexicon_policy({"stupid", "idiot"})).positions == std::vector<std::size_t>{0, 2, 3});
  }
  SUBCASE("zero hits fall back to one random position") {
    const Instance miss = make_instance("n", {"have", "a", "day"}, 0);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Corruption f = corrupt(miss, lexicon_policy({"stupid"}, seed));
      REQUIRE(f.positions.size() == 1);
      REQUIRE(f.positions[0] < 3);
      REQUIRE(f.tokens.size() == 3);
    }
  }
  SUBCASE("empty lexicon is invalid") { CHECK_THROWS_AS(corrupt(hit, lexicon_policy({})), DataError); }
}

TEST_CASE("random-one masking") {
  MaskPolicy p;
  CHECK(corrupt(make_instance("s", {"solo"}, 0), p).positions == std::vector<std::size_t>{0});

  // Uniform over positions: every index shows up across seeds.
  const Instance five = make_instance("f", {"a", "b", "c", "d", "e"}, 0);
  std::vector<int> seen(5, 0);
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    p.seed = seed;
    const Corruption c = corrupt(five, p);
    REQUIRE(c.positions.size() == 1);
    ++seen[c.positions[0]];
  }
  for (int s : seen) CHECK(s > 60);
}

TEST_CASE("masking contracts over generated texts") {
  std::mt19937_64 rng(99);
  const std::vector<std::string> vocab = {"foo", "bar", "BAD", "ugly", "nice", "x"};
  const MaskPolicy lex = lexicon_policy({"bad", "ugly"}, 5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> toks;
    for (std::size_t k = 0; k < 1 + rng() % 10; ++k) toks.push_back(vocab[rng() % vocab.size()]);
    const Instance inst = make_instance("g", toks, 0);
    std::vector<std::size_t> hits;
    for (std::size_t k = 0; k < toks.size(); ++k)
      if (toks[k] == "BAD" || toks[k] == "ugly") hits.push_back(k);
    Engine e = substream(trial, "t");
    const Corruption c = corrupt(inst, lex, e);
    REQUIRE(c.tokens.size() == toks.size());
    if (hits.empty())
      REQUIRE(c.positions.size() == 1);
    else
      REQUIRE(c.positions == hits);
    for (std::size_t k = 0; k < toks.size(); ++k) {
      const bool masked = std::find(c.positions.begin(), c.positions.end(), k) != c.positions.end();
      REQUIRE((masked ? c.tokens[k] == "[MASK]" : c.tokens[k] == toks[k]));
    }
  }
}

TEST_CASE("reconstruct_embed") {
  const EmbeddingTable t(2, {{"a", {1, 0}}, {"b", {0, 1}}, {"orig", {-1, 0}}, {"ctx", {1, 0}}});
  SUBCASE("centroid of neighbours, original excluded") {
    const auto fills = reconstruct_embed({"ctx", "[MASK]", "ctx"}, {1}, t, 2, {"orig"});
    // Centroid (1,0): "a" and "ctx" tie at cosine 1, "a" wins lexicographically.
    CHECK(fills == std::vector<std::string>{"a"});
    CHECK(reconstruct_embed({"ctx", "[MASK]", "ctx"}, {1}, t, 2, {"a"}) == std::vector<std::string>{"ctx"});
  }
  SUBCASE("no context gives the lexicographically first token") {
    CHECK(reconstruct_embed({"[MASK]"}, {0}, t, 2) == std::vector<std::string>{"a"});
    CHECK(reconstruct_embed({"[MASK]"}, {0}, t, 2, {"a"}) == std::vector<std::string>{"b"});
  }
  SUBCASE("never returns the mask token") {
    const EmbeddingTable m(2, {{"[MASK]", {1, 0}}, {"z", {0, 1}}});
    CHECK(reconstruct_embed({"[MASK]"}, {0}, m, 1) == std::vector<std::string>{"z"});
    const EmbeddingTable mm(2, {{"[MASK]", {1, 0}}, {"y", {0.5, 0.1}}, {"z", {0, 1}}});
    CHECK(reconstruct_embed({"[MASK]", "[MASK]", "[MASK]"}, {1}, mm, 1) == std::vector<std::string>{"y"});
  }
  SUBCASE("window bounds the context") {
    const EmbeddingTable w(2, {{"a", {1, 0}}, {"b", {0, 1}}, {"p", {1, 0}}, {"q", {0, 1}}});
    // Window 1 reaches only "q"; window 3 also takes both "p".
    CHECK(reconstruct_embed({"p", "p", "q", "[MASK]"}, {3}, w, 1, {"x"}) == std::vector<std::string>{"b"});
    CHECK(reconstruct_embed({"p", "p", "q", "[MASK]"}, {3}, w, 3, {"x"}) == std::vector<std::string>{"a"});
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(reconstruct_embed({"a"}, {3}, t, 1), DataError);
    CHECK_THROWS_AS(reconstruct_embed({"a"}, {0}, t, 0), DataError);
  }
}

TEST_CASE("ssmba_generate") {
  const EmbeddingTable t(2, {{"w0", {1, 0}}, {"w1", {0, 1}}, {"w2", {1, 1}}, {"w3", {-1, 0}}, {"w4", {0, -1}}});
  const EmbeddingReconstructor recon(t);
  Corpus three{"three",
               {make_instance("a", {"w0", "w1"}, 1), make_instance("b", {"w2"}, 0),
                make_instance("c", {"w3", "w4", "w0"}, 1, "de", Domain::WUL)}};
  MaskPolicy p;
  p.seed = 17;

  const Corpus out = ssmba_generate(three, p, recon, 2);
  REQUIRE(out.size() == 6);
  CHECK(out[0].id == "a#ssmba1");
  CHECK(out[1].id == "a#ssmba2");
  CHECK(out[5].id == "c#ssmba2");
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Instance& parent = three[k / 2];
    CHECK(out[k].label == parent.label);
    CHECK(out[k].language == parent.language);
    CHECK(out[k].domain == parent.domain);
    CHECK(out[k].tokens.size() == parent.tokens.size());
    REQUIRE(out[k].provenance.has_value());
    CHECK(out[k].provenance->method == "SSMBA");
    CHECK(out[k].provenance->parents == std::vector<std::string>{parent.id});
    for (const auto& tok : out[k].tokens) CHECK(tok != "[MASK]");
  }

  SUBCASE("fixed seed is byte-identical, independent of threads") {
    const Corpus again = ssmba_generate(three, p, recon, 2, 4);
    CHECK(again == out);
  }
  SUBCASE("labels preserved on a large corpus") {
    const Corpus all = make_all_corpus();
    const Corpus gen = ssmba_generate(all, p, recon, 1, 4);
    REQUIRE(gen.size() == all.size());
    for (std::size_t k = 0; k < gen.size(); ++k) REQUIRE(gen[k].label == all[k].label);
  }
  SUBCASE("reconstructor contract violations") {
    CHECK_THROWS_AS(ssmba_generate(three, p, BadReconstructor({}), 1), DataError);
    CHECK_THROWS_AS(ssmba_generate(three, p, BadReconstructor({"[MASK]"}), 1), DataError);
    CHECK_THROWS_AS(ssmba_generate(three, p, recon, 0), DataError);
    Corpus unlabeled = three;
    unlabeled.instances[1].label.reset();
    CHECK_THROWS_AS(ssmba_generate(unlabeled, p, recon, 1), DataError);
  }
  SUBCASE("lexicon policy with a stub reconstructor") {
    const MaskPolicy lex = lexicon_policy({"w0"}, 3);
    const Corpus g = ssmba_generate(three, lex, CountingReconstructor(), 1);
    CHECK(g[0].tokens == std::vector<std::string>{"fill0", "w1"});
    CHECK(g[2].tokens == std::vector<std::string>{"w3", "w4", "fill0"});
  }
}

TEST_CASE("load_lexicon") {
  TempDir dir;
  write_file(dir / "lex.txt", "Stupid\n\n  idiot \r\nmoron\n");
  const auto lex = load_lexicon(dir / "lex.txt");
  CHECK(lex.size() == 3);
  CHECK(lex.count("stupid") == 1);
  CHECK(lex.count("idiot") == 1);
  CHECK_THROWS_AS(load_lexicon(dir / "nope.txt"), IoError);
}

TEST_CASE("HTTP reconstructor") {
  httplib::Server server;
  server.Post("/fill", [](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    nlohmann::json fills = nlohmann::json::array();
    for (std::size_t k = 0; k < body.at("mask_positions").size(); ++k) fills.push_back("remote");
    res.set_content(nlohmann::json{{"fills", fills}}.dump(), "application/json");
  });
  server.Post("/short", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"fills": []})", "application/json");
  });
  server.Post("/garbage", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json", "text/plain");
  });
  server.Post("/down", [](const httplib::Request&, httplib::Response& res) { res.status = 503; });
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const std::string base = "http://127.0.0.1:" + std::to_string(port);

  const MaskedText text{"inst-7", {"a", "[MASK]", "c"}, {1}, {"b"}, "[MASK]"};
  CHECK(HttpReconstructor(base + "/fill").fill(text) == std::vector<std::string>{"remote"});

  auto message = [&](const std::string& path) {
    try {
      HttpReconstructor(base + path, std::chrono::milliseconds(2000)).fill(text);
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("/short").find("inst-7") != std::string::npos);
  CHECK(message("/down").find("503") != std::string::npos);
  CHECK(message("/down").find("inst-7") != std::string::npos);
  CHECK(message("/garbage").find("inst-7") != std::string::npos);

  Corpus one{"one", {make_instance("z", {"p", "q"}, 1)}};
  const Corpus g = ssmba_generate(one, MaskPolicy{}, HttpReconstructor(base + "/fill"), 2, 2);
  CHECK(g.size() == 2);
  CHECK(g[0].label == 1);

  server.stop();
  worker.join();

  CHECK_THROWS_AS(HttpReconstructor("ftp://x"), DataError);
  CHECK_FALSE(message("/fill").empty());  // nothing listening any more
}
