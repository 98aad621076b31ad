// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/ssm.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ssmreg/error.hpp"

namespace ssmreg {

StatisticalShapeModel::StatisticalShapeModel(std::vector<Vec3> mean,
                                             std::vector<Triangle> triangles,
                                             Eigen::VectorXd eigenvalues,
                                             Eigen::MatrixXd modes,
                                             Eigen::VectorXd spectrum, int n_shapes)
    : mean_(std::move(mean)),
      triangles_(std::move(triangles)),
      eigenvalues_(std::move(eigenvalues)),
      modes_(std::move(modes)),
      spectrum_(std::move(spectrum)),
      n_shapes_(n_shapes) {
  if (modes_.rows() != 3 * static_cast<Eigen::Index>(mean_.size()) ||
      modes_.cols() != eigenvalues_.size()) {
    throw InvalidArgument("mode matrix shape does not match mean and eigenvalues");
  }
  weighted_ = modes_ * eigenvalues_.cwiseSqrt().asDiagonal();
  mean_mesh_ = make_mesh(mean_, triangles_);
}

Eigen::VectorXd stack_vertices(std::span<const Vec3> vertices) {
  Eigen::VectorXd out(3 * vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) out.segment<3>(3 * i) = vertices[i];
  return out;
}

StatisticalShapeModel build_ssm(const ShapeCorpus& corpus) {
  const int n_s = static_cast<int>(corpus.shapes.size());
  if (n_s < 2) throw InvalidArgument("a shape model needs at least 2 shapes");
  const TriangleMesh& first = corpus.shapes.front();
  for (int j = 1; j < n_s; ++j) {
    if (!same_topology(first, corpus.shapes[j])) {
      throw GeometryError("shape " + std::to_string(j) +
                          " does not share the topology of shape 0");
    }
  }
  const int n_v = static_cast<int>(first.vertices.size());

  Eigen::MatrixXd d(3 * n_v, n_s);
  for (int j = 0; j < n_s; ++j) d.col(j) = stack_vertices(corpus.shapes[j].vertices);
  const Eigen::VectorXd mean = d.rowwise().mean();
  d.colwise() -= mean;

  const Eigen::MatrixXd gram = (d.transpose() * d) / static_cast<double>(n_s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericalError("Gram eigen-decomposition failed");

  // Eigen returns ascending order.
  Eigen::VectorXd spectrum = eig.eigenvalues().reverse().cwiseMax(0.0);
  const Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();
  const double trace = gram.trace();
  const double cutoff = std::max(1e-12 * trace, 1e-20);

  int kept = 0;
  while (kept < n_s && spectrum[kept] > cutoff) ++kept;

  Eigen::MatrixXd modes(3 * n_v, kept);
  for (int j = 0; j < kept; ++j) {
    Eigen::VectorXd m = d * vectors.col(j);
    m.normalize();
    // Columns for small eigenvalues drift from orthogonality by about
    // eps * lambda_max / lambda_j; two Gram-Schmidt passes restore it.
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) m -= modes.col(i).dot(m) * modes.col(i);
      m.normalize();
    }
    Eigen::Index imax = 0;
    m.cwiseAbs().maxCoeff(&imax);
    if (m[imax] < 0) m = -m;
    modes.col(j) = m;
  }
  for (int j = kept; j < n_s; ++j) spectrum[j] = 0.0;

  std::vector<Vec3> mean_vertices(n_v);
  for (int i = 0; i < n_v; ++i) mean_vertices[i] = mean.segment<3>(3 * i);
  return StatisticalShapeModel(std::move(mean_vertices), first.triangles,
                               spectrum.head(kept), std::move(modes), spectrum, n_s);
}

namespace {

void check_mode_count(const StatisticalShapeModel& ssm, Eigen::Index n) {
  if (n < 0 || n > ssm.mode_count()) {
    throw InvalidArgument("requested " + std::to_string(n) + " modes but the model has " +
                          std::to_string(ssm.mode_count()));
  }
}

}  // namespace

TriangleMesh instantiate(const StatisticalShapeModel& ssm, const Eigen::VectorXd& s) {
  check_mode_count(ssm, s.size());
  if (s.size() == 0 || s.isZero(0.0)) return ssm.mean_mesh();
  const Eigen::VectorXd offset = ssm.weighted_modes().leftCols(s.size()) * s;
  std::vector<Vec3> vertices = ssm.mean();
  for (std::size_t i = 0; i < vertices.size(); ++i) vertices[i] += offset.segment<3>(3 * i);
  TriangleMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = ssm.triangles();
  mesh.normals = compute_vertex_normals(mesh.vertices, mesh.triangles);
  return mesh;
}

Eigen::VectorXd project(const StatisticalShapeModel& ssm, const TriangleMesh& shape,
                        int n_modes) {
  check_mode_count(ssm, n_modes);
  if (static_cast<int>(shape.vertices.size()) != ssm.vertex_count() ||
      shape.triangles != ssm.triangles()) {
    throw GeometryError("shape is not in correspondence with the model topology");
  }
  const Eigen::VectorXd centered =
      stack_vertices(shape.vertices) - stack_vertices(ssm.mean());
  const Eigen::VectorXd coeffs = ssm.modes().leftCols(n_modes).transpose() * centered;
  return coeffs.cwiseQuotient(ssm.eigenvalues().head(n_modes).cwiseSqrt());
}

Vec3 deform_matched_point(const StatisticalShapeModel& ssm, const BarycentricLocation& loc,
                          const Eigen::VectorXd& s) {
  check_mode_count(ssm, s.size());
  const Triangle& t = ssm.triangles().at(loc.triangle);
  Vec3 p = Vec3::Zero();
  for (int k = 0; k < 3; ++k) {
    Vec3 v = ssm.mean()[t[k]];
    if (s.size() > 0) v += ssm.vertex_modes(t[k], static_cast<int>(s.size())) * s;
    p += loc.mu[k] * v;
  }
  return p;
}

}  // namespace ssmreg
