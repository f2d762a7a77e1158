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
#include "vforge/corpus.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "vforge/error.hpp"
#include "vforge/rng.hpp"

namespace vforge {
namespace {

using nlohmann::json;

std::vector<std::string> whitespace_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

json provenance_json(const Provenance& p) {
  json j = {{"method", p.method}, {"parents", p.parents}};
  if (p.lambda) j["lambda"] = *p.lambda;
  return j;
}

}  // namespace

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::GAO:
      return "GAO";
    case Domain::TRAC:
      return "TRAC";
    case Domain::WUL:
      return "WUL";
  }
  return "?";
}

Domain parse_domain(std::string_view tag) {
  if (tag == "GAO") return Domain::GAO;
  if (tag == "TRAC") return Domain::TRAC;
  if (tag == "WUL") return Domain::WUL;
  throw DataError("unknown domain tag '" + std::string(tag) + "'");
}

void validate(const Instance& inst) {
  if (inst.tokens.empty()) throw DataError("instance '" + inst.id + "' has no tokens");
  if (inst.label && *inst.label != 0 && *inst.label != 1)
    throw DataError("instance '" + inst.id + "' has non-binary label " + std::to_string(*inst.label));
}

std::string to_jsonl(const Instance& inst) {
  json j;
  j["id"] = inst.id;
  j["tokens"] = inst.tokens;
  if (inst.label) j["label"] = *inst.label;
  j["language"] = inst.language;
  j["domain"] = std::string(to_string(inst.domain));
  if (inst.provenance) j["provenance"] = provenance_json(*inst.provenance);
  return j.dump();
}

Instance parse_instance(std::string_view line_text, const std::string& where, std::size_t line,
                        const LoadOptions& options) {
  json j;
  try {
    j = json::parse(line_text);
  } catch (const json::exception& e) {
    throw ParseError(where, line, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(where, line, "expected a JSON object");

  static const std::unordered_set<std::string> known = {"id",       "tokens", "text",      "label",
                                                        "language", "domain", "provenance"};
  if (options.strict_schema) {
    for (const auto& [key, _] : j.items())
      if (!known.count(key)) throw ParseError(where, line, "unexpected key '" + key + "'");
  }

  Instance inst;
  try {
    if (!j.contains("id") || !j["id"].is_string()) throw ParseError(where, line, "missing string 'id'");
    inst.id = j["id"].get<std::string>();
    if (j.contains("tokens")) {
      inst.tokens = j["tokens"].get<std::vector<std::string>>();
    } else if (j.contains("text")) {
      inst.tokens = whitespace_tokens(j["text"].get<std::string>());
    } else {
      throw ParseError(where, line, "needs 'tokens' or 'text'");
    }
    if (j.contains("label") && !j["label"].is_null()) {
      if (!j["label"].is_number_integer()) throw ParseError(where, line, "label must be 0 or 1");
      inst.label = j["label"].get<int>();
    } else if (options.require_labels) {
      throw ParseError(where, line, "missing label");
    }
    if (!j.contains("language")) throw ParseError(where, line, "missing 'language'");
    inst.language = j["language"].get<std::string>();
    if (!j.contains("domain")) throw ParseError(where, line, "missing 'domain'");
    inst.domain = parse_domain(j["domain"].get<std::string>());
    if (j.contains("provenance")) {
      const json& p = j["provenance"];
      Provenance prov;
      prov.method = p.at("method").get<std::string>();
      prov.parents = p.at("parents").get<std::vector<std::string>>();
      if (p.contains("lambda") && !p["lambda"].is_null()) prov.lambda = p["lambda"].get<double>();
      inst.provenance = std::move(prov);
    }
    validate(inst);
  } catch (const ParseError&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(where, line, e.what());
  } catch (const DataError& e) {
    throw ParseError(where, line, e.what());
  }
  return inst;
}

Corpus load_corpus(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  Corpus corpus;
  corpus.name = path.stem().string();
  std::unordered_set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    Instance inst = parse_instance(text, path.string(), line, options);
    if (!seen.insert(inst.id).second)
      throw ParseError(path.string(), line, "duplicate id '" + inst.id + "'");
    corpus.instances.push_back(std::move(inst));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write corpus file " + path.string());
  for (const Instance& inst : corpus.instances) out << to_jsonl(inst) << '\n';
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::size_t round_half_up(double x) {
  // The epsilon absorbs representation error such as 0.1 * 5 = 0.5000000000000001
  // or 0.1 * 25 = 2.4999999999999996.
  return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9));
}

std::pair<Corpus, Corpus> split_few_shot(const Corpus& corpus, const SplitSpec& spec) {
  if (!(spec.few_shot_fraction > 0.0 && spec.few_shot_fraction < 1.0))
    throw DataError("few-shot fraction must lie in (0, 1)");

  std::map<std::pair<std::string, Domain>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Instance& inst = corpus[i];
    if (!inst.label) throw DataError("split requires labeled instances; '" + inst.id + "' has none");
    strata[{inst.language, inst.domain}].push_back(i);
  }

  std::vector<bool> chosen(corpus.size(), false);
  for (auto& [key, members] : strata) {
    const double expected = spec.few_shot_fraction * static_cast<double>(members.size());
    if (expected < 1.0 - 1e-9) {
      throw DataError("stratum " + key.first + "/" + std::string(to_string(key.second)) + " has " +
                      std::to_string(members.size()) + " instances, too few for fraction " +
                      std::to_string(spec.few_shot_fraction));
    }
    const std::size_t take = round_half_up(expected);
    Engine rng = substream(spec.seed, "split:" + key.first + ":" + std::string(to_string(key.second)));
    std::vector<std::size_t> order = members;
    shuffle(order, rng);
    for (std::size_t k = 0; k < take; ++k) chosen[order[k]] = true;
  }

  Corpus few{corpus.name + ".fewshot", {}};
  Corpus eval{corpus.name + ".eval", {}};
  for (std::size_t i = 0; i < corpus.size(); ++i)
    (chosen[i] ? few : eval).instances.push_back(corpus[i]);
  return {std::move(few), std::move(eval)};
}

Corpus filter(const Corpus& corpus, const std::optional<std::string>& language,
              const std::optional<Domain>& domain) {
  Corpus out{corpus.name, {}};
  for (const Instance& inst : corpus.instances) {
    if (language && inst.language != *language) continue;
    if (domain && inst.domain != *domain) continue;
    out.instances.push_back(inst);
  }
  return out;
}

Corpus concat(const std::vector<Corpus>& parts, std::string name) {
  Corpus out{std::move(name), {}};
  std::unordered_set<std::string> seen;
  for (const Corpus& part : parts) {
    for (const Instance& inst : part.instances) {
      if (!seen.insert(inst.id).second) throw DataError("duplicate id '" + inst.id + "' in concatenation");
      out.instances.push_back(inst);
    }
  }
  return out;
}

}  // namespace vforge
