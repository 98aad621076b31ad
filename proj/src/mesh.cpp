// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/mesh.hpp"

#include <cmath>
#include <string>

#include "ssmreg/error.hpp"

namespace ssmreg {

namespace {

Vec3 face_cross(std::span<const Vec3> v, const Triangle& t) {
  return (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]]);
}

void check_indices(std::span<const Vec3> vertices, std::span<const Triangle> triangles) {
  const int n = static_cast<int>(vertices.size());
  for (std::size_t f = 0; f < triangles.size(); ++f) {
    for (int idx : triangles[f]) {
      if (idx < 0 || idx >= n) {
        throw GeometryError("triangle " + std::to_string(f) + " references vertex " +
                            std::to_string(idx) + " but the mesh has " +
                            std::to_string(n) + " vertices");
      }
    }
  }
}

}  // namespace

std::vector<Vec3> compute_vertex_normals(std::span<const Vec3> vertices,
                                         std::span<const Triangle> triangles) {
  check_indices(vertices, triangles);
  std::vector<Vec3> normals(vertices.size(), Vec3::Zero());
  // The unnormalised cross product has magnitude 2 * area, which gives the
  // area weighting directly.
  for (const Triangle& t : triangles) {
    const Vec3 n = face_cross(vertices, t);
    for (int idx : t) normals[idx] += n;
  }
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const double len = normals[i].norm();
    if (!(len > 0.0)) {
      throw GeometryError("vertex " + std::to_string(i) +
                          " has no incident area (isolated vertex)");
    }
    normals[i] /= len;
  }
  return normals;
}

void validate(const TriangleMesh& mesh) {
  check_indices(mesh.vertices, mesh.triangles);
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    if (!(face_cross(mesh.vertices, mesh.triangles[f]).norm() > 0.0)) {
      throw GeometryError("triangle " + std::to_string(f) + " is degenerate");
    }
  }
  if (mesh.normals.size() != mesh.vertices.size()) {
    throw GeometryError("normal count does not match vertex count");
  }
  for (std::size_t i = 0; i < mesh.normals.size(); ++i) {
    if (std::abs(mesh.normals[i].norm() - 1.0) > 1e-9) {
      throw GeometryError("normal " + std::to_string(i) + " is not unit length");
    }
  }
}

TriangleMesh make_mesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles) {
  TriangleMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  check_indices(mesh.vertices, mesh.triangles);
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    if (!(face_cross(mesh.vertices, mesh.triangles[f]).norm() > 0.0)) {
      throw GeometryError("triangle " + std::to_string(f) + " is degenerate");
    }
  }
  mesh.normals = compute_vertex_normals(mesh.vertices, mesh.triangles);
  return mesh;
}

Vec3 face_normal(const TriangleMesh& mesh, int triangle) {
  return face_cross(mesh.vertices, mesh.triangles[triangle]).normalized();
}

double triangle_area(const TriangleMesh& mesh, int triangle) {
  return 0.5 * face_cross(mesh.vertices, mesh.triangles[triangle]).norm();
}

double surface_area(const TriangleMesh& mesh) {
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    total += triangle_area(mesh, static_cast<int>(f));
  }
  return total;
}

OrientedPoint point_at(const TriangleMesh& mesh, const BarycentricLocation& loc) {
  const Triangle& t = mesh.triangles.at(loc.triangle);
  OrientedPoint out;
  out.position = loc.mu[0] * mesh.vertices[t[0]] + loc.mu[1] * mesh.vertices[t[1]] +
                 loc.mu[2] * mesh.vertices[t[2]];
  const Vec3 n = loc.mu[0] * mesh.normals[t[0]] + loc.mu[1] * mesh.normals[t[1]] +
                 loc.mu[2] * mesh.normals[t[2]];
  const double len = n.norm();
  out.normal = len > 1e-12 ? Vec3(n / len) : face_normal(mesh, loc.triangle);
  return out;
}

TriangleMesh transformed(const TriangleMesh& mesh, const SimilarityTransform& t) {
  TriangleMesh out = mesh;
  for (auto& v : out.vertices) v = t.apply(v);
  for (auto& n : out.normals) n = t.rotate(n);
  return out;
}

bool same_topology(const TriangleMesh& a, const TriangleMesh& b) {
  return a.vertices.size() == b.vertices.size() && a.triangles == b.triangles;
}

}  // namespace ssmreg
