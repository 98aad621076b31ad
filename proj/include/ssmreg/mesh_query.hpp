// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ssmreg/bvh.hpp"
#include "ssmreg/mesh.hpp"

namespace ssmreg {

struct SurfacePoint {
  Vec3 point = Vec3::Zero();
  BarycentricLocation loc;
  double distance = 0.0;
};

/// A mesh paired with its BVH for repeated Euclidean queries.
class MeshIndex {
 public:
  explicit MeshIndex(const TriangleMesh& mesh);

  SurfacePoint closest_point(const Vec3& p) const;
  const TriangleBvh& bvh() const { return bvh_; }

 private:
  TriangleBvh bvh_;
};

SurfacePoint closest_point_on_mesh(const Vec3& p, const TriangleMesh& mesh);

/// Linear scan over every triangle; reference for the BVH path.
SurfacePoint closest_point_brute_force(const Vec3& p, const TriangleMesh& mesh);

/// Largest distance from a vertex of `from` to the surface of `to`.
double directed_hausdorff(const TriangleMesh& from, const TriangleMesh& to,
                          Execution exec = Execution::Parallel);

/// Symmetric vertex-to-surface Hausdorff distance in mm.
double hausdorff_distance(const TriangleMesh& a, const TriangleMesh& b,
                          Execution exec = Execution::Parallel);

}  // namespace ssmreg
