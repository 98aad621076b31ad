// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace ssmreg {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Triangle = std::array<int, 3>;

/// A measured or model surface sample: position in mm and unit normal.
struct OrientedPoint {
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
};

/// Position on a mesh triangle. `mu` holds the weights of the triangle's
/// three vertices in index order; they are nonnegative and sum to one.
struct BarycentricLocation {
  int triangle = -1;
  Vec3 mu = Vec3::Zero();
};

enum class Execution { Serial, Parallel };

}  // namespace ssmreg
