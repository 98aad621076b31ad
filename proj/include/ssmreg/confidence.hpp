// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssmreg/noise.hpp"
#include "ssmreg/transform.hpp"

namespace ssmreg {

enum class ConfidenceTier {
  VeryConfident = 0,
  Confident = 1,
  SomewhatConfident = 2,
  LowConfidence = 3,
  NoConfidence = 4,
};

inline constexpr int kTierCount = 5;

std::string_view to_string(ConfidenceTier tier);
ConfidenceTier tier_from_string(std::string_view s);

/// Probability levels of the confidence ladder, one per success tier.
std::vector<double> default_p_ladder();

/// Throws InvalidArgument unless the ladder holds 1 to 4 strictly
/// increasing probabilities in (0, 1).
void validate_ladder(std::span<const double> ladder);

struct Classification {
  ConfidenceTier tier = ConfidenceTier::NoConfidence;
  std::optional<double> passing_p;  // first ladder level where both tests pass
};

/// Sum over inliers of the squared Mahalanobis residual
/// (y_p - a R x_p - t)^T Sigma^-1 (...), Sigma = R sigma_x R^T + sigma_y.
double position_score(std::span<const OrientedPoint> data,
                      std::span<const OrientedPoint> matched, const SimilarityTransform& t,
                      const PositionNoise& noise);

/// Sum over inliers of v^T diag(kappa, kappa - 2 beta, kappa + 2 beta) v with
/// v = [acos(y_n.R x_n), asin(g1.R^T y_n), asin(g2.R^T y_n)].
double orientation_score(std::span<const OrientedPoint> data,
                         std::span<const OrientedPoint> matched,
                         const SimilarityTransform& t, std::span<const KentNoise> kent);

/// Same, with uniform parameters and frames from tangent_frame(x_n).
double orientation_score(std::span<const OrientedPoint> data,
                         std::span<const OrientedPoint> matched,
                         const SimilarityTransform& t, const KentParameters& kent);

/// The first ladder level p at which E_p < chi2_inv(p, 3n) and
/// E_o < chi2_inv(p, 2n) both hold sets the tier.
Classification classify(double e_p, double e_o, int n_data,
                        std::span<const double> ladder = {});

struct LadderThresholds {
  double p;
  double position;     // chi2_inv(p, 3n)
  double orientation;  // chi2_inv(p, 2n)
};
std::vector<LadderThresholds> ladder_thresholds(int n_data, std::span<const double> ladder);

}  // namespace ssmreg
