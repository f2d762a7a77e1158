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
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vforge/error.hpp"
#include "vforge/pipeline.hpp"

namespace py = pybind11;
using namespace vforge;

namespace {

py::list schedules_to_py(const std::vector<PairSchedule>& schedules) {
  py::list out;
  for (const PairSchedule& s : schedules) out.append(py::cast(s.pairs));
  return out;
}

std::vector<PairedOutcome> outcomes_from(const std::vector<std::tuple<int, int, int>>& rows) {
  std::vector<PairedOutcome> out;
  out.reserve(rows.size());
  for (const auto& [gold, a, b] : rows) out.push_back({std::to_string(out.size()), gold, a, b});
  return out;
}

EmbeddingTable table_from(const std::map<std::string, std::vector<double>>& entries) {
  if (entries.empty()) throw DataError("embedding table needs entries");
  std::vector<std::pair<std::string, Vector>> rows(entries.begin(), entries.end());
  const std::size_t dim = rows.front().second.size();
  return EmbeddingTable(dim, std::move(rows));
}

py::dict synthetic_to_py(const SyntheticInstance& s) {
  py::dict d;
  d["tokens"] = s.tokens;
  d["label"] = s.label;
  d["lambda"] = s.lambda_used;
  d["method"] = std::string(to_string(s.method));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "vicinity-forge: vicinal data augmentation over embedding tables";
  m.attr("__version__") = kVersion;

  // Translators run newest first, so the base goes in before its subclasses.
  auto data_error = py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<DegenerateAngle>(m, "DegenerateAngle", data_error.ptr());
  py::register_exception<OutOfRangeTheta>(m, "OutOfRangeTheta", data_error.ptr());
  py::register_exception<ExhaustedPairs>(m, "ExhaustedPairs", data_error.ptr());
  py::register_exception<UndefinedCorrelation>(m, "UndefinedCorrelation", data_error.ptr());

  // geometry
  m.def("cos_alpha", [](const Vector& a, const Vector& b) { return cos_alpha(a, b); }, py::arg("x_i"),
        py::arg("x_j"));
  m.def(
      "cos_theta_from_rule",
      [](double ca, const std::string& rule) { return cos_theta_from_rule(ca, parse_theta_rule(rule)); },
      py::arg("cos_alpha"), py::arg("rule") = "half");
  m.def(
      "mixag_lambda", [](const Vector& a, const Vector& b, double ct) { return mixag_lambda(a, b, ct); },
      py::arg("x_i"), py::arg("x_j"), py::arg("cos_theta"));
  m.def("mix_labels", &mix_labels, py::arg("lam"), py::arg("y_i"), py::arg("y_j"));
  m.def("mixag_label", &mixag_label, py::arg("lam"), py::arg("y_i"), py::arg("y_j"));

  py::class_<EmbeddingTable>(m, "EmbeddingTable")
      .def(py::init(&table_from), py::arg("entries"))
      .def_static("load", &load_embeddings, py::arg("path"))
      .def_property_readonly("dimension", &EmbeddingTable::dimension)
      .def("__len__", &EmbeddingTable::size)
      .def("encode",
           [](const EmbeddingTable& t, const std::vector<std::string>& tokens, bool zero_oov) {
             return encode(tokens, t, zero_oov ? OovPolicy::ZeroVector : OovPolicy::Error).vectors;
           },
           py::arg("tokens"), py::arg("zero_oov") = false)
      .def("decode",
           [](const EmbeddingTable& t, const std::vector<Vector>& vectors) {
             return decode(VectorSequence{t.dimension(), vectors}, t);
           },
           py::arg("vectors"));

  m.def(
      "mixag_combine",
      [](const std::vector<std::string>& ti, int yi, const std::vector<std::string>& tj, int yj,
         const EmbeddingTable& table, const std::string& theta) {
        return synthetic_to_py(
            mixag_combine(encode(ti, table), yi, encode(tj, table), yj, parse_theta_rule(theta), table));
      },
      py::arg("tokens_i"), py::arg("y_i"), py::arg("tokens_j"), py::arg("y_j"), py::arg("table"),
      py::arg("theta") = "half");
  m.def(
      "mixup_combine",
      [](const std::vector<std::string>& ti, int yi, const std::vector<std::string>& tj, int yj,
         const EmbeddingTable& table, double lam) {
        return synthetic_to_py(mixup_with_lambda(lam, encode(ti, table), yi, encode(tj, table), yj, table));
      },
      py::arg("tokens_i"), py::arg("y_i"), py::arg("tokens_j"), py::arg("y_j"), py::arg("table"), py::arg("lam"));

  // schedules
  m.def(
      "mixup_schedule",
      [](std::size_t n, int iterations, std::uint64_t seed) {
        return schedules_to_py(mixup_schedule(n, iterations, seed));
      },
      py::arg("n"), py::arg("iterations"), py::arg("seed") = 0);
  m.def(
      "mixag_schedule",
      [](std::size_t n, int iterations, std::uint64_t seed) {
        return schedules_to_py(mixag_schedule(n, seed, iterations));
      },
      py::arg("n"), py::arg("iterations"), py::arg("seed") = 0);

  // statistics
  m.def("vicinal_risk", [](const std::vector<double>& l) { return vicinal_risk(l); }, py::arg("losses"));
  m.def(
      "mcnemar",
      [](long b, long c, bool exact) {
        const McnemarResult r = mcnemar_from_counts(b, c, exact);
        py::dict d;
        d["statistic"] = r.statistic;
        d["p_value"] = r.p_value;
        d["b"] = r.b;
        d["c"] = r.c;
        return d;
      },
      py::arg("b"), py::arg("c"), py::arg("exact") = false);
  m.def(
      "bonferroni", [](double alpha, int comparisons) { return bonferroni({alpha, comparisons}); },
      py::arg("alpha"), py::arg("comparisons"));
  m.def(
      "pearson",
      [](const std::vector<double>& xs, const std::vector<double>& ys) {
        const PearsonResult r = pearson(xs, ys);
        return py::make_tuple(r.r, r.p_value);
      },
      py::arg("xs"), py::arg("ys"));
  m.def(
      "precision_recall",
      [](const std::vector<int>& gold, const std::vector<int>& pred) {
        const PrecisionRecall r = precision_recall(gold, pred);
        return py::make_tuple(r.precision, r.recall);
      },
      py::arg("gold"), py::arg("pred"));
  m.def(
      "flip_rates",
      [](const std::vector<std::tuple<int, int, int>>& rows) {
        const FlipRates f = flip_rates(outcomes_from(rows));
        return py::make_tuple(f.neg_degraded_pct, f.pos_gained_pct);
      },
      py::arg("outcomes"), "outcomes: list of (gold, pred_a, pred_b)");
  m.def("chi_square_sf", &chi_square_sf, py::arg("x"), py::arg("df"));

  // pipelines
  m.def(
      "split",
      [](const std::filesystem::path& corpus, const std::filesystem::path& out_dir, double fraction,
         std::uint64_t seed) {
        const SplitResult r = run_split(corpus, {fraction, seed}, out_dir);
        return py::make_tuple(r.few_shot_path, r.eval_path, r.few_shot, r.eval);
      },
      py::arg("corpus"), py::arg("out_dir"), py::arg("fraction") = 0.1, py::arg("seed") = 0);
  m.def(
      "augment",
      [](const std::filesystem::path& corpus, const std::filesystem::path& out, const std::filesystem::path& embeddings,
         const std::string& method, const std::string& regime, const std::string& scope, int iterations,
         std::uint64_t seed, const std::string& theta, int threads) {
        RunConfig cfg;
        cfg.corpus = corpus;
        cfg.out = out;
        cfg.embeddings = embeddings;
        cfg.method = parse_method(method);
        cfg.regime = parse_regime(regime);
        cfg.scope = parse_scope(scope);
        cfg.iterations = iterations;
        cfg.seed = seed;
        cfg.mixag = parse_theta_rule(theta);
        cfg.threads = threads;
        const AugmentResult r = run_augment(cfg);
        py::dict d;
        d["corpus"] = r.corpus_path;
        d["manifest"] = r.manifest_path;
        d["ssmba"] = r.ssmba_generated;
        d["mixed"] = r.mixed_generated;
        d["skipped"] = r.skipped_pairs;
        return d;
      },
      py::arg("corpus"), py::arg("out"), py::arg("embeddings"), py::arg("method") = "MIXAG",
      py::arg("regime") = "MONOLINGUAL", py::arg("scope") = "PER_DOMAIN", py::arg("iterations") = 1,
      py::arg("seed") = 0, py::arg("theta") = "half", py::arg("threads") = 1);
}
