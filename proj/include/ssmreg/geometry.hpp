// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ssmreg/types.hpp"

namespace ssmreg {

struct TrianglePoint {
  Vec3 point;
  Vec3 mu;  // weights of a, b, c
  double distance_sq;
};

/// Exact closest point on triangle (a, b, c) to p, resolving the vertex,
/// edge and interior regions.
TrianglePoint closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                                        const Vec3& c);

/// True when the open segment from -> to crosses triangle (a, b, c).
/// Endpoint contacts within `eps` of the segment parameter range are ignored.
bool segment_hits_triangle(const Vec3& from, const Vec3& to, const Vec3& a,
                           const Vec3& b, const Vec3& c, double eps = 1e-9);

}  // namespace ssmreg
