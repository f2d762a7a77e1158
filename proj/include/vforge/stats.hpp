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
#ifndef VFORGE_STATS_HPP
#define VFORGE_STATS_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vforge {

/// Gold label and the predictions of two systems for one instance.
struct PairedOutcome {
  std::string id;
  int gold = 0;
  int pred_a = 0;
  int pred_b = 0;
};

std::vector<PairedOutcome> load_outcomes(const std::filesystem::path& path);

// --- distribution tails -----------------------------------------------------
//
// Regularized incomplete gamma by series (x < a + 1) or Lentz continued
// fraction; regularized incomplete beta by Lentz continued fraction with the
// usual symmetry swap. Both converge to ~1e-15 relative.

double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);
double regularized_beta(double a, double b, double x);

/// P(X >= x) for X ~ chi-square(df).
double chi_square_sf(double x, double df);
/// P(|T| >= |t|) for T ~ Student t(df).
double student_t_two_sided_p(double t, double df);

// --- tests and scores -------------------------------------------------------

/// Mean loss over the vicinal samples.
double vicinal_risk(std::span<const double> losses);

struct McnemarResult {
  double statistic = 0.0;
  double p_value = 1.0;
  long b = 0;  // A correct, B wrong
  long c = 0;  // A wrong, B correct
  bool exact = false;
};

/// Continuity-corrected chi-square with one degree of freedom. With
/// `exact`, p comes from the two-sided binomial test on (b, c) instead.
McnemarResult mcnemar(std::span<const PairedOutcome> outcomes, bool exact = false);
McnemarResult mcnemar_from_counts(long b, long c, bool exact = false);

struct SignificanceConfig {
  double alpha = 0.05;
  int comparisons = 1;
};

double bonferroni(const SignificanceConfig& cfg);

enum class FeatureSet { SYN, FAM, INV, PHO, GEO };
std::string_view to_string(FeatureSet f);
FeatureSet parse_feature_set(std::string_view tag);

struct LanguageVector {
  std::string language;
  FeatureSet feature_set = FeatureSet::SYN;
  std::vector<std::optional<double>> values;  // nullopt = missing
};

LanguageVector load_language_vector(const std::filesystem::path& path);
LanguageVector parse_language_vector(std::string_view json_text);

/// Cosine over the dimensions present in both vectors.
double cosine_language_similarity(const LanguageVector& a, const LanguageVector& b);

struct PearsonResult {
  double r = 0.0;
  double p_value = 1.0;
};

/// Sample correlation with a two-sided t-test on n - 2 degrees of freedom.
PearsonResult pearson(std::span<const double> xs, std::span<const double> ys);

/// Scores with a zero denominator are nullopt (undefined), never 0.
struct PrecisionRecall {
  std::optional<double> precision;
  std::optional<double> recall;
};

PrecisionRecall precision_recall(std::span<const int> gold, std::span<const int> pred);

struct FlipRates {
  /// Share (%) of gold-0 instances A gets right that B gets wrong.
  std::optional<double> neg_degraded_pct;
  /// Share (%) of gold-1 instances A gets wrong that B gets right.
  std::optional<double> pos_gained_pct;
};

FlipRates flip_rates(std::span<const PairedOutcome> outcomes);

}  // namespace vforge

#endif  // VFORGE_STATS_HPP
