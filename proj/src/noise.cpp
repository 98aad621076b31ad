// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "ssmreg/error.hpp"

namespace ssmreg {

PositionNoise PositionNoise::from_sd(const Vec3& sd_mm) {
  PositionNoise out;
  out.sigma_x = sd_mm.cwiseProduct(sd_mm).asDiagonal();
  return out;
}

KentParameters kent_from_sd(double sigma_deg, double eccentricity) {
  if (!(sigma_deg > 0.0)) throw InvalidArgument("orientation SD must be positive");
  if (!(eccentricity >= 0.0 && eccentricity <= 1.0)) {
    throw InvalidArgument("eccentricity must lie in [0, 1]");
  }
  const double sigma = sigma_deg * std::numbers::pi / 180.0;
  const double kappa = 1.0 / (sigma * sigma);
  return {kappa, eccentricity * kappa / 2.0};
}

KentFrame tangent_frame(const Vec3& n) {
  const double len = n.norm();
  if (!(len > 0.0)) throw InvalidArgument("tangent_frame of a zero vector");
  const Vec3 u = n / len;
  int axis = 0;
  u.cwiseAbs().minCoeff(&axis);
  const Vec3 e = Vec3::Unit(axis);
  const Vec3 g1 = (e - e.dot(u) * u).normalized();
  return {g1, u.cross(g1)};
}

double mahalanobis_sq(const Vec3& r, const Mat3& sigma) {
  const Eigen::LLT<Mat3> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("covariance is not positive definite");
  }
  return llt.matrixL().solve(r).squaredNorm();
}

double match_nll(const OrientedPoint& x, const OrientedPoint& y, const PositionNoise& pos,
                 const KentNoise& kent, const SimilarityTransform& t) {
  const Vec3 r = y.position - t.apply(x.position);
  const double position_term = 0.5 * mahalanobis_sq(r, pos.combined(t.rotation));
  const Vec3 yn_data = t.rotation.transpose() * y.normal;
  const double u1 = kent.frame.gamma1.dot(yn_data);
  const double u2 = kent.frame.gamma2.dot(yn_data);
  return position_term - kent.params.kappa * y.normal.dot(t.rotate(x.normal)) -
         kent.params.beta * (u1 * u1 - u2 * u2);
}

double circular_sd(std::span<const double> angles) {
  if (angles.empty()) throw InvalidArgument("circular_sd of an empty list");
  double sum = 0.0;
  for (double a : angles) sum += std::cos(a);
  const double rbar = std::clamp(sum / static_cast<double>(angles.size()), 1e-12, 1.0);
  return std::sqrt(-2.0 * std::log(rbar));
}

double mean_angular_error(std::span<const double> angles) {
  if (angles.empty()) throw InvalidArgument("mean_angular_error of an empty list");
  double sum = 0.0;
  for (double a : angles) sum += a;
  return sum / static_cast<double>(angles.size());
}

namespace {

Mat3 noise_factor(const Mat3& sigma) {
  const Eigen::LLT<Mat3> llt(sigma);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  // Semidefinite (e.g. zero) covariance: symmetric square root.
  Eigen::SelfAdjointEigenSolver<Mat3> eig(sigma);
  if (eig.eigenvalues().minCoeff() < -1e-12) {
    throw InvalidArgument("position covariance is not positive semidefinite");
  }
  return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

}  // namespace

OrientedPoint sample_noise(std::mt19937_64& rng, const Mat3& sigma_x,
                           const KentParameters& kent, const OrientedPoint& x) {
  const double major = kent.kappa - 2.0 * kent.beta;
  const double minor = kent.kappa + 2.0 * kent.beta;
  if (!(major > 0.0)) throw InvalidArgument("kappa - 2 beta must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec3 z;
  for (int k = 0; k < 3; ++k) z[k] = gauss(rng);
  const double g1 = gauss(rng) / std::sqrt(major);
  const double g2 = gauss(rng) / std::sqrt(minor);

  const KentFrame frame = tangent_frame(x.normal);
  OrientedPoint out;
  out.position = x.position + noise_factor(sigma_x) * z;
  out.normal = (x.normal + g1 * frame.gamma1 + g2 * frame.gamma2).normalized();
  return out;
}

}  // namespace ssmreg
