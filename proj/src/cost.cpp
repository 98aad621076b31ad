// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/cost.hpp"

#include <Eigen/Cholesky>

#include "ssmreg/error.hpp"
#include "ssmreg/transform.hpp"

namespace ssmreg {

RegistrationCost::RegistrationCost(std::span<const OrientedPoint> data,
                                   std::span<const Correspondence> inliers,
                                   const StatisticalShapeModel& ssm, int n_modes,
                                   const Mat3& sigma, const KentParameters& kent,
                                   const Mat3& base_rotation)
    : n_modes_(n_modes), kent_(kent), base_rotation_(base_rotation) {
  if (n_modes < 0 || n_modes > ssm.mode_count()) {
    throw InvalidArgument("mode count exceeds the shape model");
  }
  const Eigen::LLT<Mat3> llt(sigma);
  if (llt.info() != Eigen::Success) throw NumericalError("match covariance is singular");
  precision_ = llt.solve(Mat3::Identity());
  precision_ = 0.5 * (precision_ + precision_.transpose()).eval();

  const std::size_t n = inliers.size();
  positions_.reserve(n);
  normals_.reserve(n);
  frames_.reserve(n);
  model_normals_.reserve(n);
  mean_points_.resize(3 * static_cast<Eigen::Index>(n));
  mode_rows_.setZero(3 * static_cast<Eigen::Index>(n), n_modes);
  for (std::size_t i = 0; i < n; ++i) {
    const Correspondence& c = inliers[i];
    const OrientedPoint& x = data[c.data_index];
    positions_.push_back(x.position);
    normals_.push_back(x.normal);
    frames_.push_back(tangent_frame(x.normal));
    model_normals_.push_back(c.y.normal);
    const Triangle& t = ssm.triangles()[c.loc.triangle];
    Vec3 p = Vec3::Zero();
    for (int k = 0; k < 3; ++k) {
      p += c.loc.mu[k] * ssm.mean()[t[k]];
      if (n_modes > 0) {
        mode_rows_.middleRows<3>(3 * i) += c.loc.mu[k] * ssm.vertex_modes(t[k], n_modes);
      }
    }
    mean_points_.segment<3>(3 * i) = p;
  }
}

Eigen::VectorXd RegistrationCost::pack(const SimilarityTransform& t,
                                       const Eigen::VectorXd& s) const {
  Eigen::VectorXd x(dimension());
  x.segment<3>(kRotation) = so3_log(t.rotation * base_rotation_.transpose());
  x.segment<3>(kTranslation) = t.translation;
  x[kScale] = t.scale;
  x.tail(n_modes_) = s;
  return x;
}

SimilarityTransform RegistrationCost::transform(const Eigen::VectorXd& x) const {
  SimilarityTransform t;
  t.rotation = so3_exp(x.segment<3>(kRotation)) * base_rotation_;
  t.translation = x.segment<3>(kTranslation);
  t.scale = x[kScale];
  return t;
}

double RegistrationCost::evaluate(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
  const Vec3 omega = x.segment<3>(kRotation);
  const Mat3 rot = so3_exp(omega) * base_rotation_;
  const Vec3 trans = x.segment<3>(kTranslation);
  const double scale = x[kScale];
  const Eigen::VectorXd s = x.tail(n_modes_);

  Eigen::VectorXd deformed = mean_points_;
  if (n_modes_ > 0) deformed.noalias() += mode_rows_ * s;

  const std::size_t n = positions_.size();
  Eigen::VectorXd weighted(grad ? 3 * n : 0);  // P r_i, stacked
  Vec3 g_rot = Vec3::Zero();  // left-perturbation gradient
  Vec3 g_trans = Vec3::Zero();
  double g_scale = 0.0;
  double value = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 rx = rot * positions_[i];
    const Vec3 r = deformed.segment<3>(3 * i) - scale * rx - trans;
    const Vec3 pr = precision_ * r;
    value += 0.5 * r.dot(pr);

    const Vec3& yn = model_normals_[i];
    const Vec3 rn = rot * normals_[i];
    const Vec3 rg1 = rot * frames_[i].gamma1;
    const Vec3 rg2 = rot * frames_[i].gamma2;
    const double c = yn.dot(rn);
    const double u1 = rg1.dot(yn);
    const double u2 = rg2.dot(yn);
    value += kent_.kappa * (1.0 - c) - kent_.beta * (u1 * u1 - u2 * u2);

    if (grad) {
      weighted.segment<3>(3 * i) = pr;
      g_trans -= pr;
      g_scale -= rx.dot(pr);
      g_rot += scale * pr.cross(rx);
      g_rot -= kent_.kappa * rn.cross(yn);
      g_rot -= 2.0 * kent_.beta * (u1 * rg1.cross(yn) - u2 * rg2.cross(yn));
    }
  }
  value += 0.5 * s.squaredNorm();

  if (grad) {
    grad->resize(dimension());
    grad->segment<3>(kRotation) = so3_left_jacobian(omega).transpose() * g_rot;
    grad->segment<3>(kTranslation) = g_trans;
    (*grad)[kScale] = g_scale;
    if (n_modes_ > 0) grad->tail(n_modes_) = mode_rows_.transpose() * weighted + s;
  }
  return value;
}

Eigen::VectorXd RegistrationCost::curvature_diagonal(const Eigen::VectorXd& x) const {
  const Mat3 rot = so3_exp(x.segment<3>(kRotation)) * base_rotation_;
  const double scale = x[kScale];
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dimension());
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const Vec3 rx = rot * positions_[i];
    const Mat3 j_rot = scale * skew(rx);
    d.segment<3>(kRotation) += (j_rot.transpose() * precision_ * j_rot).diagonal();
    const Vec3 rn = rot * normals_[i];
    d.segment<3>(kRotation) +=
        kent_.kappa * (Vec3::Ones() - rn.cwiseProduct(rn));
    d.segment<3>(kTranslation) += precision_.diagonal();
    d[kScale] += rx.dot(precision_ * rx);
  }
  if (n_modes_ > 0) {
    for (int k = 0; k < n_modes_; ++k) {
      double acc = 1.0;
      for (std::size_t i = 0; i < positions_.size(); ++i) {
        const Vec3 b = mode_rows_.block<3, 1>(3 * i, k);
        acc += b.dot(precision_ * b);
      }
      d[kShape + k] = acc;
    }
  }
  return d;
}

}  // namespace ssmreg
