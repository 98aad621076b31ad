// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/confidence.hpp"

#include <algorithm>
#include <cmath>

#include "ssmreg/chi2.hpp"
#include "ssmreg/error.hpp"

namespace ssmreg {

namespace {

constexpr std::string_view kTierNames[kTierCount] = {
    "very_confident", "confident", "somewhat_confident", "low_confidence", "no_confidence"};

void check_pairs(std::span<const OrientedPoint> data, std::span<const OrientedPoint> matched) {
  if (data.size() != matched.size()) throw InvalidArgument("data/match size mismatch");
  if (data.empty()) throw InvalidArgument("confidence scores need at least one inlier");
}

}  // namespace

std::string_view to_string(ConfidenceTier tier) {
  return kTierNames[static_cast<int>(tier)];
}

ConfidenceTier tier_from_string(std::string_view s) {
  for (int k = 0; k < kTierCount; ++k) {
    if (kTierNames[k] == s) return static_cast<ConfidenceTier>(k);
  }
  throw ParseError("unknown confidence tier '" + std::string(s) + "'");
}

std::vector<double> default_p_ladder() { return {0.95, 0.9975, 0.9999, 0.999999}; }

void validate_ladder(std::span<const double> ladder) {
  if (ladder.empty() || ladder.size() > 4) {
    throw InvalidArgument("p ladder must hold between 1 and 4 levels");
  }
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (!(ladder[k] > 0.0 && ladder[k] < 1.0)) {
      throw InvalidArgument("p ladder levels must lie in (0, 1)");
    }
    if (k > 0 && !(ladder[k] > ladder[k - 1])) {
      throw InvalidArgument("p ladder levels must be strictly increasing");
    }
  }
}

double position_score(std::span<const OrientedPoint> data,
                      std::span<const OrientedPoint> matched, const SimilarityTransform& t,
                      const PositionNoise& noise) {
  check_pairs(data, matched);
  const Mat3 sigma = noise.combined(t.rotation);
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    total += mahalanobis_sq(matched[i].position - t.apply(data[i].position), sigma);
  }
  return total;
}

double orientation_score(std::span<const OrientedPoint> data,
                         std::span<const OrientedPoint> matched,
                         const SimilarityTransform& t, std::span<const KentNoise> kent) {
  check_pairs(data, matched);
  if (kent.size() != data.size()) throw InvalidArgument("one Kent model per point required");
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const KentParameters& k = kent[i].params;
    if (k.kappa - 2.0 * k.beta < 0.0) throw InvalidArgument("kappa - 2 beta is negative");
    const Vec3 yn = t.rotation.transpose() * matched[i].normal;
    const double v0 = std::acos(std::clamp(yn.dot(data[i].normal), -1.0, 1.0));
    const double v1 = std::asin(std::clamp(kent[i].frame.gamma1.dot(yn), -1.0, 1.0));
    const double v2 = std::asin(std::clamp(kent[i].frame.gamma2.dot(yn), -1.0, 1.0));
    total += k.kappa * v0 * v0 + (k.kappa - 2.0 * k.beta) * v1 * v1 +
             (k.kappa + 2.0 * k.beta) * v2 * v2;
  }
  return total;
}

double orientation_score(std::span<const OrientedPoint> data,
                         std::span<const OrientedPoint> matched,
                         const SimilarityTransform& t, const KentParameters& kent) {
  std::vector<KentNoise> per_point(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    per_point[i] = {kent, tangent_frame(data[i].normal)};
  }
  return orientation_score(data, matched, t, per_point);
}

std::vector<LadderThresholds> ladder_thresholds(int n_data, std::span<const double> ladder) {
  if (n_data < 1) throw InvalidArgument("n_data must be positive");
  std::vector<LadderThresholds> out;
  for (double p : ladder) {
    out.push_back({p, chi2_inv(p, 3.0 * n_data), chi2_inv(p, 2.0 * n_data)});
  }
  return out;
}

Classification classify(double e_p, double e_o, int n_data, std::span<const double> ladder) {
  const std::vector<double> fallback = default_p_ladder();
  if (ladder.empty()) ladder = fallback;
  validate_ladder(ladder);
  if (!std::isfinite(e_p) || !std::isfinite(e_o)) return {};
  const auto thresholds = ladder_thresholds(n_data, ladder);
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    if (e_p < thresholds[k].position && e_o < thresholds[k].orientation) {
      return {static_cast<ConfidenceTier>(k), thresholds[k].p};
    }
  }
  return {};
}

}  // namespace ssmreg
