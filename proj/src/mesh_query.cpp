// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/mesh_query.hpp"

#include <algorithm>
#include <cmath>

#include "ssmreg/error.hpp"
#include "ssmreg/geometry.hpp"

namespace ssmreg {

namespace {

SurfacePoint surface_point(const Vec3& p, const TriangleMesh& mesh, int f) {
  const Triangle& t = mesh.triangles[f];
  const TrianglePoint tp = closest_point_on_triangle(p, mesh.vertices[t[0]],
                                                     mesh.vertices[t[1]], mesh.vertices[t[2]]);
  return {tp.point, {f, tp.mu}, std::sqrt(tp.distance_sq)};
}

void require_nonempty(const TriangleMesh& mesh) {
  if (mesh.empty()) throw GeometryError("mesh has no triangles");
}

}  // namespace

MeshIndex::MeshIndex(const TriangleMesh& mesh) : bvh_(mesh.vertices, mesh.triangles) {
  require_nonempty(mesh);
}

SurfacePoint MeshIndex::closest_point(const Vec3& p) const {
  const TriangleBvh::Hit hit = bvh_.nearest(p);
  const Triangle& t = bvh_.triangles()[hit.triangle];
  const auto& v = bvh_.vertices();
  const TrianglePoint tp = closest_point_on_triangle(p, v[t[0]], v[t[1]], v[t[2]]);
  return {tp.point, {hit.triangle, tp.mu}, std::sqrt(tp.distance_sq)};
}

SurfacePoint closest_point_on_mesh(const Vec3& p, const TriangleMesh& mesh) {
  return MeshIndex(mesh).closest_point(p);
}

SurfacePoint closest_point_brute_force(const Vec3& p, const TriangleMesh& mesh) {
  require_nonempty(mesh);
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    const Triangle& t = mesh.triangles[f];
    const double d2 = closest_point_on_triangle(p, mesh.vertices[t[0]], mesh.vertices[t[1]],
                                                mesh.vertices[t[2]])
                          .distance_sq;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = static_cast<int>(f);
    }
  }
  return surface_point(p, mesh, best);
}

double directed_hausdorff(const TriangleMesh& from, const TriangleMesh& to,
                          Execution exec) {
  require_nonempty(from);
  const MeshIndex index(to);
  const long n = static_cast<long>(from.vertices.size());
  double worst = 0.0;
  if (exec == Execution::Parallel) {
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (long i = 0; i < n; ++i) {
      worst = std::max(worst, index.closest_point(from.vertices[i]).distance);
    }
  } else {
    for (long i = 0; i < n; ++i) {
      worst = std::max(worst, index.closest_point(from.vertices[i]).distance);
    }
  }
  return worst;
}

double hausdorff_distance(const TriangleMesh& a, const TriangleMesh& b, Execution exec) {
  return std::max(directed_hausdorff(a, b, exec), directed_hausdorff(b, a, exec));
}

}  // namespace ssmreg
