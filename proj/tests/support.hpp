// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

// Small meshes and random helpers shared by the unit tests.

#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ssmreg/mesh.hpp"
#include "ssmreg/transform.hpp"

namespace ssmreg::testing {

/// UV sphere with outward normals.
inline TriangleMesh uv_sphere(double radius, int rings = 24, int segments = 48,
                              const Vec3& center = Vec3::Zero()) {
  std::vector<Vec3> v;
  std::vector<Triangle> f;
  v.push_back(center + Vec3(0, 0, radius));
  for (int i = 1; i < rings; ++i) {
    const double theta = std::numbers::pi * i / rings;
    for (int j = 0; j < segments; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / segments;
      v.push_back(center + radius * Vec3(std::sin(theta) * std::cos(phi),
                                         std::sin(theta) * std::sin(phi), std::cos(theta)));
    }
  }
  v.push_back(center + Vec3(0, 0, -radius));
  const int south = static_cast<int>(v.size()) - 1;
  auto at = [segments](int ring, int j) { return 1 + (ring - 1) * segments + (j % segments); };
  for (int j = 0; j < segments; ++j) f.push_back({0, at(1, j), at(1, j + 1)});
  for (int i = 1; i < rings - 1; ++i) {
    for (int j = 0; j < segments; ++j) {
      f.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      f.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  }
  for (int j = 0; j < segments; ++j) f.push_back({south, at(rings - 1, j + 1), at(rings - 1, j)});
  return make_mesh(std::move(v), std::move(f));
}

/// n x n grid in the z = 0 plane spanning [0, size]^2.
inline TriangleMesh flat_grid(int n, double size) {
  std::vector<Vec3> v;
  std::vector<Triangle> f;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) v.emplace_back(size * i / n, size * j / n, 0.0);
  }
  auto id = [n](int i, int j) { return i * (n + 1) + j; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return make_mesh(std::move(v), std::move(f));
}

/// Sphere with smooth random bumps; same topology for every seed.
inline TriangleMesh bumpy_sphere(std::uint64_t seed, double radius = 10.0, double bump = 1.5) {
  TriangleMesh base = uv_sphere(radius, 16, 32);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  const Vec3 a(g(rng), g(rng), g(rng));
  const Vec3 b(g(rng), g(rng), g(rng));
  std::vector<Vec3> v = base.vertices;
  for (Vec3& p : v) {
    const Vec3 u = p.normalized();
    const double r = radius + bump * (std::sin(2.0 * u.dot(a)) + 0.5 * std::cos(3.0 * u.dot(b)));
    p = r * u;
  }
  return make_mesh(std::move(v), base.triangles);
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline Mat3 random_rotation(std::mt19937_64& rng, double max_angle_rad) {
  std::uniform_real_distribution<double> u(0.0, max_angle_rad);
  return so3_exp(random_unit(rng) * u(rng));
}

/// Random symmetric positive definite matrix with eigenvalues in [lo, hi].
inline Mat3 random_spd(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  const Mat3 q = random_rotation(rng, std::numbers::pi);
  return q * Vec3(u(rng), u(rng), u(rng)).asDiagonal() * q.transpose();
}

}  // namespace ssmreg::testing
