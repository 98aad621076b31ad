// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/correspondence.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "ssmreg/error.hpp"
#include "ssmreg/geometry.hpp"

namespace ssmreg {

namespace {

Mat3 whitening_of(const Mat3& sigma) {
  const Eigen::LLT<Mat3> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("match covariance is not positive definite");
  }
  return llt.matrixL().solve(Mat3::Identity());
}

std::vector<Vec3> whiten(const std::vector<Vec3>& vertices, const Mat3& w) {
  std::vector<Vec3> out(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) out[i] = w * vertices[i];
  return out;
}

// The data point mapped into the model frame, plus its rotated Kent frame.
struct Query {
  Vec3 whitened;
  Vec3 normal;
  Vec3 gamma1;
  Vec3 gamma2;
};

Query make_query(const OrientedPoint& x, const MatchSurface& surface,
                 const SimilarityTransform& t) {
  const KentFrame frame = tangent_frame(x.normal);
  return {surface.whitening() * t.apply(x.position), t.rotate(x.normal),
          t.rotate(frame.gamma1), t.rotate(frame.gamma2)};
}

Vec3 interpolated_normal(const TriangleMesh& mesh, int f, const Vec3& mu) {
  const Triangle& t = mesh.triangles[f];
  const Vec3 n = mu[0] * mesh.normals[t[0]] + mu[1] * mesh.normals[t[1]] +
                 mu[2] * mesh.normals[t[2]];
  const double len = n.norm();
  return len > 1e-12 ? Vec3(n / len) : face_normal(mesh, f);
}

struct TriangleEval {
  double cost;
  double sq_mahalanobis;
  Vec3 mu;
  Vec3 normal;
};

TriangleEval evaluate(const MatchSurface& surface, const Query& q, const KentParameters& kent,
                      int f) {
  const auto& wv = surface.whitened_bvh().vertices();
  const Triangle& t = surface.mesh().triangles[f];
  const TrianglePoint tp = closest_point_on_triangle(q.whitened, wv[t[0]], wv[t[1]], wv[t[2]]);
  const Vec3 n = interpolated_normal(surface.mesh(), f, tp.mu);
  const double u1 = q.gamma1.dot(n);
  const double u2 = q.gamma2.dot(n);
  const double cost = 0.5 * tp.distance_sq - kent.kappa * n.dot(q.normal) -
                      kent.beta * (u1 * u1 - u2 * u2);
  return {cost, tp.distance_sq, tp.mu, n};
}

Correspondence finish(int data_index, const MatchSurface& surface, const Query& q,
                      const KentParameters& kent, int f) {
  const TriangleEval e = evaluate(surface, q, kent, f);
  Correspondence c;
  c.data_index = data_index;
  c.loc = {f, e.mu};
  const Triangle& t = surface.mesh().triangles[f];
  const auto& v = surface.mesh().vertices;
  c.y.position = e.mu[0] * v[t[0]] + e.mu[1] * v[t[1]] + e.mu[2] * v[t[2]];
  c.y.normal = e.normal;
  c.sq_mahalanobis = e.sq_mahalanobis;
  c.angular_error = std::acos(std::clamp(e.normal.dot(q.normal), -1.0, 1.0));
  c.nll = e.cost;
  return c;
}

}  // namespace

MatchSurface::MatchSurface(TriangleMesh mesh, const Mat3& sigma)
    : mesh_(std::move(mesh)), sigma_(sigma), whitening_(whitening_of(sigma)) {
  if (mesh_.empty()) throw GeometryError("cannot match against an empty mesh");
  const std::vector<Vec3> white = whiten(mesh_.vertices, whitening_);
  bvh_ = TriangleBvh(white, mesh_.triangles);
}

Correspondence find_most_likely_match(int data_index, const OrientedPoint& x,
                                      const MatchSurface& surface, const KentParameters& kent,
                                      const SimilarityTransform& t) {
  const Query q = make_query(x, surface, t);
  // The orientation term is bounded below by -kappa whenever 2 beta <= kappa;
  // the small slack absorbs rounding in the box and triangle distances.
  const double floor = -kent.kappa - 1e-12 * (1.0 + kent.kappa);
  const TriangleBvh::Hit hit = surface.whitened_bvh().minimize(
      q.whitened, [floor](double d2) { return 0.5 * d2 * (1.0 - 1e-12) + floor; },
      [&](int f) { return evaluate(surface, q, kent, f).cost; });
  return finish(data_index, surface, q, kent, hit.triangle);
}

Correspondence find_most_likely_match_brute_force(int data_index, const OrientedPoint& x,
                                                  const MatchSurface& surface,
                                                  const KentParameters& kent,
                                                  const SimilarityTransform& t) {
  const Query q = make_query(x, surface, t);
  int best = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < surface.mesh().triangles.size(); ++f) {
    const double c = evaluate(surface, q, kent, static_cast<int>(f)).cost;
    if (c < best_cost) {
      best_cost = c;
      best = static_cast<int>(f);
    }
  }
  return finish(data_index, surface, q, kent, best);
}

std::vector<Correspondence> match_all(std::span<const OrientedPoint> data,
                                      const MatchSurface& surface, const KentParameters& kent,
                                      const SimilarityTransform& t, Execution exec) {
  const long n = static_cast<long>(data.size());
  std::vector<Correspondence> out(data.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < n; ++i) {
      out[i] = find_most_likely_match(static_cast<int>(i), data[i], surface, kent, t);
    }
  } else {
    for (long i = 0; i < n; ++i) {
      out[i] = find_most_likely_match(static_cast<int>(i), data[i], surface, kent, t);
    }
  }
  return out;
}

}  // namespace ssmreg
