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
#include "vforge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "vforge/error.hpp"

namespace vforge {
namespace {

constexpr int kMaxIter = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

void require_binary(int v, const char* field) {
  if (v != 0 && v != 1) throw DataError(std::string(field) + " must be 0 or 1");
}

double gamma_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), modified Lentz.
double gamma_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

std::optional<double> ratio(long num, long den, double scale = 1.0) {
  if (den == 0) return std::nullopt;
  return scale * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw DataError("regularized_gamma_p: need a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw DataError("regularized_gamma_q: need a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_cf(a, x);
}

double regularized_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0 || x < 0.0 || x > 1.0) throw DataError("regularized_beta: argument out of range");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double chi_square_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(df / 2.0, x / 2.0);
}

double student_t_two_sided_p(double t, double df) {
  if (std::isinf(t)) return 0.0;
  return regularized_beta(df / 2.0, 0.5, df / (df + t * t));
}

double vicinal_risk(std::span<const double> losses) {
  if (losses.empty()) throw DataError("vicinal risk of an empty sample is undefined");
  double sum = 0.0;
  for (double l : losses) {
    if (!(l >= 0.0)) throw DataError("losses must be non-negative");
    sum += l;
  }
  return sum / static_cast<double>(losses.size());
}

McnemarResult mcnemar_from_counts(long b, long c, bool exact) {
  if (b < 0 || c < 0) throw DataError("mcnemar counts must be non-negative");
  McnemarResult r;
  r.b = b;
  r.c = c;
  r.exact = exact;
  const long n = b + c;
  if (n == 0) return r;
  const double diff = std::max(static_cast<double>(std::labs(b - c)) - 1.0, 0.0);
  r.statistic = diff * diff / static_cast<double>(n);
  if (exact) {
    // Two-sided binomial(n, 1/2) tail at min(b, c).
    const long k = std::min(b, c);
    double tail = 0.0;
    for (long i = 0; i <= k; ++i)
      tail += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) - n * std::log(2.0));
    r.p_value = std::min(1.0, 2.0 * tail);
  } else {
    r.p_value = std::min(1.0, chi_square_sf(r.statistic, 1.0));
  }
  return r;
}

McnemarResult mcnemar(std::span<const PairedOutcome> outcomes, bool exact) {
  if (outcomes.empty()) throw DataError("mcnemar needs at least one paired outcome");
  long b = 0;
  long c = 0;
  for (const PairedOutcome& o : outcomes) {
    require_binary(o.gold, "gold");
    require_binary(o.pred_a, "pred_a");
    require_binary(o.pred_b, "pred_b");
    const bool a_ok = o.pred_a == o.gold;
    const bool b_ok = o.pred_b == o.gold;
    if (a_ok && !b_ok) ++b;
    if (!a_ok && b_ok) ++c;
  }
  return mcnemar_from_counts(b, c, exact);
}

double bonferroni(const SignificanceConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw DataError("significance level must lie in (0, 1)");
  if (cfg.comparisons < 1) throw DataError("number of comparisons must be positive");
  return cfg.alpha / cfg.comparisons;
}

std::string_view to_string(FeatureSet f) {
  switch (f) {
    case FeatureSet::SYN:
      return "SYN";
    case FeatureSet::FAM:
      return "FAM";
    case FeatureSet::INV:
      return "INV";
    case FeatureSet::PHO:
      return "PHO";
    case FeatureSet::GEO:
      return "GEO";
  }
  return "?";
}

FeatureSet parse_feature_set(std::string_view tag) {
  if (tag == "SYN") return FeatureSet::SYN;
  if (tag == "FAM") return FeatureSet::FAM;
  if (tag == "INV") return FeatureSet::INV;
  if (tag == "PHO") return FeatureSet::PHO;
  if (tag == "GEO") return FeatureSet::GEO;
  throw DataError("unknown feature set '" + std::string(tag) + "'");
}

LanguageVector parse_language_vector(std::string_view json_text) {
  LanguageVector v;
  try {
    auto j = nlohmann::json::parse(json_text);
    v.language = j.at("language").get<std::string>();
    v.feature_set = parse_feature_set(j.at("feature_set").get<std::string>());
    for (const auto& e : j.at("values")) {
      if (e.is_null()) {
        v.values.emplace_back(std::nullopt);
      } else {
        v.values.emplace_back(e.get<double>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed language vector: ") + e.what());
  }
  if (std::none_of(v.values.begin(), v.values.end(), [](const auto& x) { return x.has_value(); }))
    throw DataError("language vector '" + v.language + "' has no values");
  return v;
}

LanguageVector load_language_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open language vector " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_language_vector(buf.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

double cosine_language_similarity(const LanguageVector& a, const LanguageVector& b) {
  if (a.feature_set != b.feature_set)
    throw DataError("cannot compare " + std::string(to_string(a.feature_set)) + " with " +
                    std::string(to_string(b.feature_set)) + " vectors");
  if (a.values.size() != b.values.size()) throw DimensionMismatch("language vectors differ in length");
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (!a.values[i] || !b.values[i]) continue;
    ++kept;
    ab += *a.values[i] * *b.values[i];
    aa += *a.values[i] * *a.values[i];
    bb += *b.values[i] * *b.values[i];
  }
  if (kept == 0) throw DataError(a.language + "/" + b.language + ": no dimension present in both vectors");
  if (aa == 0.0 || bb == 0.0) throw DataError(a.language + "/" + b.language + ": zero vector on shared dimensions");
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

PearsonResult pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DimensionMismatch("pearson: series differ in length");
  if (xs.size() < 3) throw DataError("pearson needs at least 3 points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson: a series is constant");
  PearsonResult res;
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = n - 2.0;
  const double one_minus = 1.0 - res.r * res.r;
  if (one_minus <= 0.0) {
    res.p_value = 0.0;
  } else {
    res.p_value = student_t_two_sided_p(res.r * std::sqrt(df / one_minus), df);
  }
  return res;
}

PrecisionRecall precision_recall(std::span<const int> gold, std::span<const int> pred) {
  if (gold.size() != pred.size()) throw DimensionMismatch("gold and pred differ in length");
  if (gold.empty()) throw DataError("precision/recall of an empty sample");
  long tp = 0;
  long fp = 0;
  long fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    require_binary(gold[i], "gold");
    require_binary(pred[i], "pred");
    if (gold[i] == 1 && pred[i] == 1) ++tp;
    if (gold[i] == 0 && pred[i] == 1) ++fp;
    if (gold[i] == 1 && pred[i] == 0) ++fn;
  }
  return {ratio(tp, tp + fp), ratio(tp, tp + fn)};
}

FlipRates flip_rates(std::span<const PairedOutcome> outcomes) {
  if (outcomes.empty()) throw DataError("flip rates need at least one paired outcome");
  long neg_a_ok = 0;
  long neg_degraded = 0;
  long pos_a_wrong = 0;
  long pos_gained = 0;
  for (const PairedOutcome& o : outcomes) {
    require_binary(o.gold, "gold");
    require_binary(o.pred_a, "pred_a");
    require_binary(o.pred_b, "pred_b");
    const bool a_ok = o.pred_a == o.gold;
    const bool b_ok = o.pred_b == o.gold;
    if (o.gold == 0 && a_ok) {
      ++neg_a_ok;
      if (!b_ok) ++neg_degraded;
    }
    if (o.gold == 1 && !a_ok) {
      ++pos_a_wrong;
      if (b_ok) ++pos_gained;
    }
  }
  return {ratio(neg_degraded, neg_a_ok, 100.0), ratio(pos_gained, pos_a_wrong, 100.0)};
}

std::vector<PairedOutcome> load_outcomes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open outcome file " + path.string());
  std::vector<PairedOutcome> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      PairedOutcome o;
      o.id = j.contains("id") ? j["id"].get<std::string>() : std::to_string(lineno);
      o.gold = j.at("gold").get<int>();
      o.pred_a = j.at("pred_a").get<int>();
      o.pred_b = j.at("pred_b").get<int>();
      require_binary(o.gold, "gold");
      require_binary(o.pred_a, "pred_a");
      require_binary(o.pred_b, "pred_b");
      out.push_back(std::move(o));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string(), lineno, e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const DataError& e) {
      throw ParseError(path.string(), lineno, e.what());
    }
  }
  if (out.empty()) throw ParseError(path.string(), lineno, "no outcomes");
  return out;
}

}  // namespace vforge
