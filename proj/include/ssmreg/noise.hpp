// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>
#include <span>
#include <utility>

#include "ssmreg/transform.hpp"
#include "ssmreg/types.hpp"

namespace ssmreg {

/// Anisotropic Gaussian position noise. `sigma_x` is the data covariance
/// in the data frame, `sigma_y` the model-surface covariance (mm^2).
struct PositionNoise {
  Mat3 sigma_x = Mat3::Identity();
  Mat3 sigma_y = Mat3::Zero();

  static PositionNoise from_sd(const Vec3& sd_mm);

  /// R sigma_x R^T + sigma_y; scale does not enter.
  Mat3 combined(const Mat3& rotation) const {
    return rotation * sigma_x * rotation.transpose() + sigma_y;
  }
};

/// Kent concentration and ovalness. Spread is 1/(kappa - 2 beta) along the
/// major axis and 1/(kappa + 2 beta) along the minor axis.
struct KentParameters {
  double kappa = 0.0;
  double beta = 0.0;
};

/// Major and minor axes of a Kent distribution, orthogonal to its mean
/// direction.
struct KentFrame {
  Vec3 gamma1 = Vec3::UnitX();
  Vec3 gamma2 = Vec3::UnitY();
};

struct KentNoise {
  KentParameters params;
  KentFrame frame;
};

/// kappa = 1 / sigma^2 (sigma in radians), beta = e kappa / 2.
KentParameters kent_from_sd(double sigma_deg, double eccentricity);

/// Right-handed orthonormal completion of n: the global axis least aligned
/// with n is Gram-Schmidt projected to give gamma1, and gamma2 = n x gamma1.
KentFrame tangent_frame(const Vec3& n);

/// r^T Sigma^-1 r through a Cholesky solve. Throws NumericalError when
/// Sigma is not positive definite.
double mahalanobis_sq(const Vec3& r, const Mat3& sigma);

/// Negative log match likelihood up to terms constant in y:
///   1/2 r^T Sigma^-1 r - kappa y_n.(R x_n)
///     - beta ((g1.(R^T y_n))^2 - (g2.(R^T y_n))^2)
/// with r = y_p - T(x_p) and Sigma = R sigma_x R^T + sigma_y. The Kent frame
/// (g1, g2) lives in the data frame, orthogonal to x_n.
double match_nll(const OrientedPoint& x, const OrientedPoint& y, const PositionNoise& pos,
                 const KentNoise& kent, const SimilarityTransform& t);

/// sqrt(-2 ln Rbar) with Rbar the mean cosine, clamped to [1e-12, 1].
double circular_sd(std::span<const double> angles);

/// Plain mean of angular errors.
double mean_angular_error(std::span<const double> angles);

/// Corrupts x with Cholesky(sigma_x) z position noise and a tangent-plane
/// Gaussian normal perturbation along tangent_frame(x.normal).
OrientedPoint sample_noise(std::mt19937_64& rng, const Mat3& sigma_x,
                           const KentParameters& kent, const OrientedPoint& x);

}  // namespace ssmreg
