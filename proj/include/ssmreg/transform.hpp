// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ssmreg/types.hpp"

namespace ssmreg {

/// x -> scale * rotation * x + translation.
struct SimilarityTransform {
  double scale = 1.0;
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return scale * (rotation * p) + translation; }
  Vec3 rotate(const Vec3& n) const { return rotation * n; }
  OrientedPoint apply(const OrientedPoint& x) const {
    return {apply(x.position), rotate(x.normal)};
  }

  SimilarityTransform inverse() const;

  /// Composition: (*this * rhs).apply(p) == apply(rhs.apply(p)).
  SimilarityTransform operator*(const SimilarityTransform& rhs) const;
};

Mat3 skew(const Vec3& w);

/// Rotation matrix of the axis-angle vector w (Rodrigues).
Mat3 so3_exp(const Vec3& w);
Vec3 so3_log(const Mat3& rotation);

/// Left Jacobian of SO(3): exp(w + d) ~= exp(J(w) d) exp(w) for small d.
Mat3 so3_left_jacobian(const Vec3& w);

/// Angle of a rotation matrix in radians, in [0, pi].
double rotation_angle(const Mat3& rotation);

/// Nearest rotation in the Frobenius sense, with det = +1.
Mat3 orthonormalize(const Mat3& m);

}  // namespace ssmreg
