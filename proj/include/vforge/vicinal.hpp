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
#ifndef VFORGE_VICINAL_HPP
#define VFORGE_VICINAL_HPP

// Interpolation in embedding space.
//
// MIXUP draws lambda ~ Beta(alpha, alpha) and builds
//     x = lambda * x_i + (1 - lambda) * x_j.
// MIXAG instead builds x = lambda * x_i + x_j and picks lambda so that x
// makes a prescribed angle theta with x_i, where alpha is the angle between
// x_i and x_j. In the triangle (lambda x_i, x_j, x) the law of sines gives
//     lambda = |x_j| sin(alpha - theta) / (|x_i| sin(theta)),
// which is expanded in terms of cos(alpha) and cos(theta) only.
//
// Texts are handled as flattened per-token embeddings; the shorter text is
// padded with zero vectors, and the mixed vector is split back per token and
// decoded against the embedding table.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vforge/embedding.hpp"
#include "vforge/rng.hpp"

namespace vforge {

enum class Method { Mixup, Mixag, Ssmba };
std::string_view to_string(Method m);

struct MixupConfig {
  double alpha = 0.2;
  std::uint64_t seed = 0;
};

enum class ThetaRule { HalfAlpha, ThirdAlpha, Fixed };

struct MixagConfig {
  ThetaRule theta_rule = ThetaRule::HalfAlpha;
  /// Used only with ThetaRule::Fixed; must lie in (-1, 1].
  double fixed_cos_theta = 1.0;
};

/// Parses "half", "third" or "fixed:<cos>".
MixagConfig parse_theta_rule(std::string_view text);
std::string to_string(const MixagConfig& cfg);

struct SyntheticInstance {
  std::vector<std::string> tokens;
  int label = 0;
  double lambda_used = 0.0;
  std::pair<std::string, std::string> parent_ids;
  Method method = Method::Mixup;
};

/// Cosine of the angle between two nonzero vectors, clamped to [-1, 1].
double cos_alpha(std::span<const double> x_i, std::span<const double> x_j);

double cos_theta_from_rule(double cos_alpha, const MixagConfig& cfg);

/// Coefficient on x_i that makes lambda * x_i + x_j sit at angle theta from x_i.
/// Throws DegenerateAngle for colinear inputs and OutOfRangeTheta unless
/// 0 < theta < alpha.
double mixag_lambda(std::span<const double> x_i, std::span<const double> x_j, double cos_theta);

/// 1 iff lambda * y_i + (1 - lambda) * y_j >= 0.5.
int mix_labels(double lambda, int y_i, int y_j);

/// MIXAG weights are (lambda, 1); normalized to lambda / (lambda + 1)
/// before applying the MIXUP threshold.
int mixag_label(double lambda, int y_i, int y_j);

/// Pads both sequences to a common length and returns the flattened pair.
std::pair<Vector, Vector> aligned_flat(const VectorSequence& e_i, const VectorSequence& e_j);

/// Splits `flat` back into tokens. Chunks that are exactly zero (padding on
/// both sides) are dropped unless every chunk is zero.
std::vector<std::string> decode_flat(std::span<const double> flat, const EmbeddingTable& table);

SyntheticInstance mixup_with_lambda(double lambda, const VectorSequence& e_i, int y_i,
                                    const VectorSequence& e_j, int y_j, const EmbeddingTable& table);

/// Draws lambda from Beta(cfg.alpha, cfg.alpha) using `rng`.
SyntheticInstance mixup_combine(const VectorSequence& e_i, int y_i, const VectorSequence& e_j, int y_j,
                                const MixupConfig& cfg, const EmbeddingTable& table, Engine& rng);

SyntheticInstance mixag_combine(const VectorSequence& e_i, int y_i, const VectorSequence& e_j, int y_j,
                                const MixagConfig& cfg, const EmbeddingTable& table);

}  // namespace vforge

#endif  // VFORGE_VICINAL_HPP
