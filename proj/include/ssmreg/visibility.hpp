// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ssmreg/mesh.hpp"

namespace ssmreg {

/// Triangles whose face normal points toward `viewpoint` and whose centroid
/// is reachable from it without crossing another triangle.
std::vector<int> visible_triangles(const TriangleMesh& mesh, const Vec3& viewpoint);

/// Area-weighted uniform samples over a subset of triangles with
/// interpolated normals. Throws GeometryError if the subset has no area.
std::vector<OrientedPoint> sample_triangles(const TriangleMesh& mesh,
                                            std::span<const int> triangles, int n,
                                            std::mt19937_64& rng);

/// n points on the part of the mesh visible from `viewpoint`.
std::vector<OrientedPoint> sample_visible_points(const TriangleMesh& mesh, const Vec3& viewpoint,
                                                 int n, std::uint64_t seed);

}  // namespace ssmreg
