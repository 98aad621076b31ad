// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "ssmreg/mesh.hpp"
#include "ssmreg/ssm.hpp"

namespace ssmreg {

/// Population of half-open tubular cavities. The base cavity runs along z
/// with an open entrance at the low-z end and a domed closed end; its
/// cross-section is elliptical with inward ridges that occlude parts of the
/// wall. Shape j is the base plus a random combination of smooth
/// low-frequency displacement fields.
struct SyntheticCorpusSpec {
  std::uint64_t seed = 1;
  int n_shapes = 53;
  double length_mm = 70.0;
  double radius_mm = 14.0;
  double cap_depth_mm = 10.0;
  double aspect = 0.7;    // minor / major axis of the cross-section
  double bend_mm = 4.0;   // lateral centerline excursion
  int rings = 45;       // along the tube
  int segments = 48;    // around the tube
  int cap_rings = 6;
  double amplitude_mm = 4.0;  // coefficient SD of the first field
  double decay = 0.6;         // coefficient SD ratio between consecutive fields
  int max_frequency = 2;      // per axis, for the displacement fields
  int basis_size = 18;        // lowest-frequency fields used; 0 means all
  double ridge_jitter = 0.0;  // relative SD of per-shape ridge heights
  double relief_mm = 1.5;     // amplitude of the wall corrugation
  double relief_wavelength_mm = 8.0;  // along the tube
  int relief_lobes = 6;                // around the tube

  void validate() const;
};

/// Base cavity with per-ridge height factors (1 = nominal).
TriangleMesh make_cavity(const SyntheticCorpusSpec& spec, const Vec3& ridge_scale = Vec3::Ones());

/// n_shapes corresponding meshes, deterministic per seed. A shape whose
/// triangles flip relative to the base is regenerated with damped
/// amplitude; GeometryError after 5 attempts.
ShapeCorpus generate_corpus(const SyntheticCorpusSpec& spec);

/// Interior point a short distance inside the entrance, on the line between
/// the centroids of the first two rings.
Vec3 entrance_viewpoint(const TriangleMesh& cavity, const SyntheticCorpusSpec& spec,
                        double depth_mm = 5.0);

/// splitmix64-based stable seed derivation.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

}  // namespace ssmreg
