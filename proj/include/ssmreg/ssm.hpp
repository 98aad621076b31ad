// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ssmreg/mesh.hpp"

namespace ssmreg {

/// Corresponding shapes: identical triangle lists and vertex counts.
struct ShapeCorpus {
  std::vector<TriangleMesh> shapes;
};

/// PCA model of a shape corpus.
///
/// Vertex coordinates are stacked as [x0 y0 z0 x1 y1 z1 ...]. The covariance
/// is normalised by 1/n_s. Only modes with nonzero variance are retained,
/// so `mode_count() <= n_s - 1`. Each mode is oriented so that its
/// largest-magnitude component is positive.
class StatisticalShapeModel {
 public:
  StatisticalShapeModel() = default;
  StatisticalShapeModel(std::vector<Vec3> mean, std::vector<Triangle> triangles,
                        Eigen::VectorXd eigenvalues, Eigen::MatrixXd modes,
                        Eigen::VectorXd spectrum, int n_shapes);

  const std::vector<Vec3>& mean() const { return mean_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  /// Retained eigenvalues, descending and strictly positive (mm^2).
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  /// Orthonormal columns m_j, size 3 n_v x mode_count().
  const Eigen::MatrixXd& modes() const { return modes_; }
  /// Columns w_j = sqrt(lambda_j) m_j.
  const Eigen::MatrixXd& weighted_modes() const { return weighted_; }
  /// All n_s eigenvalues of the covariance (zeros included), descending.
  const Eigen::VectorXd& spectrum() const { return spectrum_; }
  int mode_count() const { return static_cast<int>(eigenvalues_.size()); }
  int vertex_count() const { return static_cast<int>(mean_.size()); }
  int shape_count() const { return n_shapes_; }

  /// The undeformed mean surface with normals.
  const TriangleMesh& mean_mesh() const { return mean_mesh_; }

  /// 3 x n_m block of weighted-mode rows for vertex i.
  Eigen::Matrix<double, 3, Eigen::Dynamic> vertex_modes(int vertex, int n_modes) const {
    return weighted_.block(3 * vertex, 0, 3, n_modes);
  }

 private:
  std::vector<Vec3> mean_;
  std::vector<Triangle> triangles_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd modes_;
  Eigen::MatrixXd weighted_;
  Eigen::VectorXd spectrum_;
  int n_shapes_ = 0;
  TriangleMesh mean_mesh_;
};

/// Stacks mesh vertices into a 3 n_v vector.
Eigen::VectorXd stack_vertices(std::span<const Vec3> vertices);

/// Snapshot PCA through the n_s x n_s Gram matrix of mean-subtracted shapes.
StatisticalShapeModel build_ssm(const ShapeCorpus& corpus);

/// Mean plus sum_j s_j w_j over the first s.size() modes, normals recomputed.
TriangleMesh instantiate(const StatisticalShapeModel& ssm, const Eigen::VectorXd& s);

/// Shape parameters (in standard deviations) of `shape` over the first
/// n_modes modes.
Eigen::VectorXd project(const StatisticalShapeModel& ssm, const TriangleMesh& shape,
                        int n_modes);

/// Barycentric combination of the three deformed triangle vertices.
Vec3 deform_matched_point(const StatisticalShapeModel& ssm, const BarycentricLocation& loc,
                          const Eigen::VectorXd& s);

}  // namespace ssmreg
