// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <span>
#include <vector>

#include "ssmreg/types.hpp"

namespace ssmreg {

/// Axis-aligned bounding volume hierarchy over a triangle soup. Immutable
/// after construction; queries are const and safe from many threads.
class TriangleBvh {
 public:
  struct Hit {
    int triangle = -1;
    double cost = std::numeric_limits<double>::infinity();
  };

  TriangleBvh() = default;
  TriangleBvh(std::span<const Vec3> vertices, std::span<const Triangle> triangles);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  bool empty() const { return triangles_.empty(); }

  /// Branch-and-bound minimisation of a per-triangle cost. `lower_bound`
  /// maps the squared distance from `query` to a node box onto a value no
  /// larger than the cost of any triangle in that box, and must be
  /// nondecreasing. Equal costs resolve to the lowest triangle index, so the
  /// result matches a linear scan that keeps the first strict minimum.
  template <typename LowerBound, typename Cost>
  Hit minimize(const Vec3& query, LowerBound&& lower_bound, Cost&& cost) const;

  /// Euclidean nearest triangle; cost is the squared distance.
  Hit nearest(const Vec3& query) const;

  /// True if any triangle other than `ignore` crosses the segment.
  bool segment_blocked(const Vec3& from, const Vec3& to, int ignore = -1) const;

 private:
  struct Box {
    Vec3 lo;
    Vec3 hi;
    double distance_sq(const Vec3& p) const {
      const Vec3 d = (lo - p).cwiseMax(p - hi).cwiseMax(0.0);
      return d.squaredNorm();
    }
    bool hit_by_segment(const Vec3& from, const Vec3& to) const;
  };
  struct Node {
    Box box;
    int left = -1;
    int right = -1;
    int begin = 0;
    int end = 0;
    bool leaf() const { return left < 0; }
  };

  int build(int begin, int end, std::vector<Vec3>& centroids);

  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

template <typename LowerBound, typename Cost>
TriangleBvh::Hit TriangleBvh::minimize(const Vec3& query, LowerBound&& lower_bound,
                                       Cost&& cost) const {
  Hit best;
  if (nodes_.empty()) return best;
  struct Entry {
    int node;
    double bound;
  };
  std::vector<Entry> stack;
  stack.reserve(64);
  stack.push_back({0, lower_bound(nodes_[0].box.distance_sq(query))});
  while (!stack.empty()) {
    const Entry e = stack.back();
    stack.pop_back();
    if (e.bound > best.cost) continue;
    const Node& node = nodes_[e.node];
    if (node.leaf()) {
      for (int k = node.begin; k < node.end; ++k) {
        const int tri = order_[k];
        const double c = cost(tri);
        if (c < best.cost || (c == best.cost && tri < best.triangle)) best = {tri, c};
      }
      continue;
    }
    const double bl = lower_bound(nodes_[node.left].box.distance_sq(query));
    const double br = lower_bound(nodes_[node.right].box.distance_sq(query));
    // Push the far child first so the near one is expanded next.
    if (bl <= br) {
      stack.push_back({node.right, br});
      stack.push_back({node.left, bl});
    } else {
      stack.push_back({node.left, bl});
      stack.push_back({node.right, br});
    }
  }
  return best;
}

}  // namespace ssmreg
