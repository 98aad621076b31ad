// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "ssmreg/transform.hpp"
#include "ssmreg/types.hpp"

namespace ssmreg {

/// Triangle surface in mm. Corresponding meshes in a corpus share the
/// triangle list; vertex i is the same anatomical point in every shape.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::vector<Vec3> normals;  // per vertex, unit length

  bool empty() const { return triangles.empty(); }
};

/// Builds a mesh from raw arrays, validating indices and triangle areas and
/// computing vertex normals.
TriangleMesh make_mesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

/// Throws GeometryError on out-of-range indices, zero-area triangles, or
/// normals that are not unit length.
void validate(const TriangleMesh& mesh);

/// Area-weighted average of incident face normals, normalized.
std::vector<Vec3> compute_vertex_normals(std::span<const Vec3> vertices,
                                         std::span<const Triangle> triangles);

Vec3 face_normal(const TriangleMesh& mesh, int triangle);
double triangle_area(const TriangleMesh& mesh, int triangle);
double surface_area(const TriangleMesh& mesh);

/// Position and interpolated unit normal at a barycentric location.
OrientedPoint point_at(const TriangleMesh& mesh, const BarycentricLocation& loc);

TriangleMesh transformed(const TriangleMesh& mesh, const SimilarityTransform& t);

bool same_topology(const TriangleMesh& a, const TriangleMesh& b);

}  // namespace ssmreg
