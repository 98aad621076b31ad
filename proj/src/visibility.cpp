// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/visibility.hpp"

#include <algorithm>
#include <cmath>

#include "ssmreg/bvh.hpp"
#include "ssmreg/error.hpp"

namespace ssmreg {

std::vector<int> visible_triangles(const TriangleMesh& mesh, const Vec3& viewpoint) {
  const TriangleBvh bvh(mesh.vertices, mesh.triangles);
  std::vector<int> visible;
  for (int f = 0; f < static_cast<int>(mesh.triangles.size()); ++f) {
    const Triangle& t = mesh.triangles[f];
    const Vec3 centroid = (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0;
    if (face_normal(mesh, f).dot(viewpoint - centroid) <= 0.0) continue;
    if (bvh.segment_blocked(viewpoint, centroid, f)) continue;
    visible.push_back(f);
  }
  return visible;
}

std::vector<OrientedPoint> sample_triangles(const TriangleMesh& mesh,
                                            std::span<const int> triangles, int n,
                                            std::mt19937_64& rng) {
  if (n < 0) throw InvalidArgument("sample count must be nonnegative");
  std::vector<double> cumulative;
  cumulative.reserve(triangles.size());
  double total = 0.0;
  for (int f : triangles) {
    total += triangle_area(mesh, f);
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw GeometryError("no visible surface area to sample");

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<OrientedPoint> points;
  points.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double pick = unit(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) --it;
    const int f = triangles[static_cast<std::size_t>(it - cumulative.begin())];
    const double r1 = std::sqrt(unit(rng));
    const double r2 = unit(rng);
    const BarycentricLocation loc{f, Vec3(1.0 - r1, r1 * (1.0 - r2), r1 * r2)};
    points.push_back(point_at(mesh, loc));
  }
  return points;
}

std::vector<OrientedPoint> sample_visible_points(const TriangleMesh& mesh, const Vec3& viewpoint,
                                                 int n, std::uint64_t seed) {
  const std::vector<int> visible = visible_triangles(mesh, viewpoint);
  std::mt19937_64 rng(seed);
  return sample_triangles(mesh, visible, n, rng);
}

}  // namespace ssmreg
