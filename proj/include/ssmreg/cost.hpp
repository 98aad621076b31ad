// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ssmreg/correspondence.hpp"
#include "ssmreg/noise.hpp"
#include "ssmreg/ssm.hpp"

namespace ssmreg {

/// Registration objective over one phase with fixed inlier matches:
///
///   1/2 sum r_i^T P r_i + sum kappa (1 - y_n.R x_n)
///     - sum beta ((g1.R^T y_n)^2 - (g2.R^T y_n)^2) + 1/2 |s|^2
///
/// with r_i = Tssm(y_i; s) - a R x_i - t and Tssm the barycentric
/// deformation of the matched point by the shape parameters. P is the inverse
/// match covariance, held fixed over the phase. Model normals are fixed.
///
/// Parameter vector: [omega(3), t(3), a, s(n_m)], where the rotation is
/// exp(omega) * base_rotation.
class RegistrationCost {
 public:
  static constexpr int kRotation = 0;
  static constexpr int kTranslation = 3;
  static constexpr int kScale = 6;
  static constexpr int kShape = 7;

  RegistrationCost(std::span<const OrientedPoint> data,
                   std::span<const Correspondence> inliers, const StatisticalShapeModel& ssm,
                   int n_modes, const Mat3& sigma, const KentParameters& kent,
                   const Mat3& base_rotation);

  int dimension() const { return kShape + n_modes_; }
  int n_modes() const { return n_modes_; }
  int size() const { return static_cast<int>(positions_.size()); }

  /// Value, and the analytic gradient when `grad` is non-null.
  double evaluate(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr) const;

  /// Diagonal of the Gauss-Newton Hessian at x, used as a preconditioner.
  Eigen::VectorXd curvature_diagonal(const Eigen::VectorXd& x) const;

  Eigen::VectorXd pack(const SimilarityTransform& t, const Eigen::VectorXd& s) const;
  SimilarityTransform transform(const Eigen::VectorXd& x) const;
  Eigen::VectorXd shape(const Eigen::VectorXd& x) const { return x.tail(n_modes_); }

 private:
  int n_modes_;
  Mat3 precision_;
  KentParameters kent_;
  Mat3 base_rotation_;
  std::vector<Vec3> positions_;    // x_p
  std::vector<Vec3> normals_;      // x_n
  std::vector<KentFrame> frames_;  // around x_n, data frame
  std::vector<Vec3> model_normals_;
  Eigen::VectorXd mean_points_;  // stacked 3N
  Eigen::MatrixXd mode_rows_;    // 3N x n_m
};

}  // namespace ssmreg
