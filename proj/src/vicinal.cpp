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
#include "vforge/vicinal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vforge/error.hpp"

namespace vforge {
namespace {

// sin(alpha) below this is treated as colinear.
constexpr double kColinearSin = 1e-7;

double clamp_unit(double c) { return std::clamp(c, -1.0, 1.0); }

double sin_from_cos(double c) { return std::sqrt(std::max(0.0, 1.0 - c * c)); }

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Mixup:
      return "MIXUP";
    case Method::Mixag:
      return "MIXAG";
    case Method::Ssmba:
      return "SSMBA";
  }
  return "?";
}

MixagConfig parse_theta_rule(std::string_view text) {
  if (text == "half") return {ThetaRule::HalfAlpha, 1.0};
  if (text == "third") return {ThetaRule::ThirdAlpha, 1.0};
  if (text.rfind("fixed:", 0) == 0) {
    std::string num(text.substr(6));
    double c = 0.0;
    try {
      std::size_t used = 0;
      c = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument(num);
    } catch (const std::exception&) {
      throw DataError("bad fixed cos(theta) '" + num + "'");
    }
    if (!(c > -1.0 && c <= 1.0)) throw DataError("fixed cos(theta) must lie in (-1, 1]");
    return {ThetaRule::Fixed, c};
  }
  throw DataError("theta rule must be half, third or fixed:<cos>; got '" + std::string(text) + "'");
}

std::string to_string(const MixagConfig& cfg) {
  switch (cfg.theta_rule) {
    case ThetaRule::HalfAlpha:
      return "half";
    case ThetaRule::ThirdAlpha:
      return "third";
    case ThetaRule::Fixed: {
      std::ostringstream os;
      os.precision(17);
      os << "fixed:" << cfg.fixed_cos_theta;
      return os.str();
    }
  }
  return "?";
}

double cos_alpha(std::span<const double> x_i, std::span<const double> x_j) {
  if (x_i.size() != x_j.size()) throw DimensionMismatch("cos_alpha: vectors differ in length");
  const double ni = l2_norm(x_i);
  const double nj = l2_norm(x_j);
  if (ni == 0.0 || nj == 0.0) throw DegenerateAngle("cos_alpha: zero vector has no angle");
  return clamp_unit(dot(x_i, x_j) / (ni * nj));
}

double cos_theta_from_rule(double cos_alpha, const MixagConfig& cfg) {
  const double c = clamp_unit(cos_alpha);
  switch (cfg.theta_rule) {
    case ThetaRule::HalfAlpha:
      return std::sqrt((1.0 + c) / 2.0);
    case ThetaRule::ThirdAlpha:
      return std::cos(std::acos(c) / 3.0);
    case ThetaRule::Fixed:
      return cfg.fixed_cos_theta;
  }
  return c;
}

double mixag_lambda(std::span<const double> x_i, std::span<const double> x_j, double cos_theta) {
  const double ca = cos_alpha(x_i, x_j);
  const double sa = sin_from_cos(ca);
  if (sa < kColinearSin) throw DegenerateAngle("mixag: x_i and x_j are colinear");
  if (!(cos_theta >= -1.0 && cos_theta <= 1.0)) throw OutOfRangeTheta("mixag: cos(theta) outside [-1, 1]");
  const double st = sin_from_cos(cos_theta);
  if (st == 0.0 || cos_theta <= ca) throw OutOfRangeTheta("mixag: theta must lie strictly between 0 and alpha");

  const double lambda = l2_norm(x_j) * (cos_theta * sa - ca * st) / (l2_norm(x_i) * st);
  if (!(lambda > 0.0)) throw OutOfRangeTheta("mixag: theta too close to alpha");
  return lambda;
}

int mix_labels(double lambda, int y_i, int y_j) {
  if (y_i == y_j) return y_i;
  return lambda * y_i + (1.0 - lambda) * y_j >= 0.5 ? 1 : 0;
}

int mixag_label(double lambda, int y_i, int y_j) { return mix_labels(lambda / (lambda + 1.0), y_i, y_j); }

std::pair<Vector, Vector> aligned_flat(const VectorSequence& e_i, const VectorSequence& e_j) {
  if (e_i.dimension != e_j.dimension) throw DimensionMismatch("sequences have different token dimensions");
  const std::size_t len = std::max(e_i.length(), e_j.length());
  return {concatenate(pad_to(e_i, len)), concatenate(pad_to(e_j, len))};
}

std::vector<std::string> decode_flat(std::span<const double> flat, const EmbeddingTable& table) {
  const VectorSequence seq = split_concat(flat, table.dimension());
  std::vector<std::string> tokens;
  for (const Vector& v : seq.vectors)
    if (!is_zero(v)) tokens.push_back(nearest_token(v, table));
  if (tokens.empty()) return decode(seq, table);
  return tokens;
}

SyntheticInstance mixup_with_lambda(double lambda, const VectorSequence& e_i, int y_i,
                                    const VectorSequence& e_j, int y_j, const EmbeddingTable& table) {
  auto [a, b] = aligned_flat(e_i, e_j);
  Vector mixed(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) mixed[k] = lambda * a[k] + (1.0 - lambda) * b[k];
  SyntheticInstance out;
  out.tokens = decode_flat(mixed, table);
  out.label = mix_labels(lambda, y_i, y_j);
  out.lambda_used = lambda;
  out.method = Method::Mixup;
  return out;
}

SyntheticInstance mixup_combine(const VectorSequence& e_i, int y_i, const VectorSequence& e_j, int y_j,
                                const MixupConfig& cfg, const EmbeddingTable& table, Engine& rng) {
  if (!(cfg.alpha > 0.0)) throw DataError("mixup alpha must be positive");
  const double lambda = sample_beta(rng, cfg.alpha, cfg.alpha);
  return mixup_with_lambda(lambda, e_i, y_i, e_j, y_j, table);
}

SyntheticInstance mixag_combine(const VectorSequence& e_i, int y_i, const VectorSequence& e_j, int y_j,
                                const MixagConfig& cfg, const EmbeddingTable& table) {
  auto [a, b] = aligned_flat(e_i, e_j);
  const double cos_theta = cos_theta_from_rule(cos_alpha(a, b), cfg);
  const double lambda = mixag_lambda(a, b, cos_theta);
  Vector mixed(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) mixed[k] = lambda * a[k] + b[k];
  SyntheticInstance out;
  out.tokens = decode_flat(mixed, table);
  out.label = mixag_label(lambda, y_i, y_j);
  out.lambda_used = lambda;
  out.method = Method::Mixag;
  return out;
}

}  // namespace vforge
