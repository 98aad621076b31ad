// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/bvh.hpp"

#include <algorithm>
#include <numeric>

#include "ssmreg/geometry.hpp"

namespace ssmreg {

namespace {
constexpr int kLeafSize = 4;
}

TriangleBvh::TriangleBvh(std::span<const Vec3> vertices,
                         std::span<const Triangle> triangles)
    : vertices_(vertices.begin(), vertices.end()),
      triangles_(triangles.begin(), triangles.end()) {
  if (triangles_.empty()) return;
  order_.resize(triangles_.size());
  std::iota(order_.begin(), order_.end(), 0);
  std::vector<Vec3> centroids(triangles_.size());
  for (std::size_t f = 0; f < triangles_.size(); ++f) {
    const Triangle& t = triangles_[f];
    centroids[f] = (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
  }
  nodes_.reserve(2 * triangles_.size() / kLeafSize + 1);
  build(0, static_cast<int>(order_.size()), centroids);
}

int TriangleBvh::build(int begin, int end, std::vector<Vec3>& centroids) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Box box{Vec3::Constant(std::numeric_limits<double>::infinity()),
          Vec3::Constant(-std::numeric_limits<double>::infinity())};
  Box cbox = box;
  for (int k = begin; k < end; ++k) {
    const Triangle& t = triangles_[order_[k]];
    for (int idx : t) {
      box.lo = box.lo.cwiseMin(vertices_[idx]);
      box.hi = box.hi.cwiseMax(vertices_[idx]);
    }
    cbox.lo = cbox.lo.cwiseMin(centroids[order_[k]]);
    cbox.hi = cbox.hi.cwiseMax(centroids[order_[k]]);
  }
  nodes_[index].box = box;
  if (end - begin <= kLeafSize) {
    nodes_[index].begin = begin;
    nodes_[index].end = end;
    return index;
  }
  int axis = 0;
  (cbox.hi - cbox.lo).maxCoeff(&axis);
  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int l, int r) {
                     const double cl = centroids[l][axis];
                     const double cr = centroids[r][axis];
                     return cl < cr || (cl == cr && l < r);
                   });
  const int left = build(begin, mid, centroids);
  const int right = build(mid, end, centroids);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

TriangleBvh::Hit TriangleBvh::nearest(const Vec3& query) const {
  return minimize(
      query, [](double d2) { return d2; },
      [&](int f) {
        const Triangle& t = triangles_[f];
        return closest_point_on_triangle(query, vertices_[t[0]], vertices_[t[1]],
                                         vertices_[t[2]])
            .distance_sq;
      });
}

bool TriangleBvh::Box::hit_by_segment(const Vec3& from, const Vec3& to) const {
  double t0 = 0.0;
  double t1 = 1.0;
  const Vec3 d = to - from;
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) {
      if (from[k] < lo[k] || from[k] > hi[k]) return false;
      continue;
    }
    double ta = (lo[k] - from[k]) / d[k];
    double tb = (hi[k] - from[k]) / d[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

bool TriangleBvh::segment_blocked(const Vec3& from, const Vec3& to, int ignore) const {
  if (nodes_.empty()) return false;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (!node.box.hit_by_segment(from, to)) continue;
    if (!node.leaf()) {
      stack.push_back(node.left);
      stack.push_back(node.right);
      continue;
    }
    for (int k = node.begin; k < node.end; ++k) {
      const int f = order_[k];
      if (f == ignore) continue;
      const Triangle& t = triangles_[f];
      if (segment_hits_triangle(from, to, vertices_[t[0]], vertices_[t[1]],
                                vertices_[t[2]])) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace ssmreg
