// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "ssmreg/bvh.hpp"
#include "ssmreg/mesh.hpp"
#include "ssmreg/noise.hpp"
#include "ssmreg/transform.hpp"

namespace ssmreg {

/// Snapshot of the deformed model for one correspondence phase. The BVH is
/// built over the mesh mapped by the whitening transform L^-1 (Sigma = L L^T),
/// so Euclidean distance there is Mahalanobis distance in the model frame.
class MatchSurface {
 public:
  MatchSurface(TriangleMesh mesh, const Mat3& sigma);

  const TriangleMesh& mesh() const { return mesh_; }
  const Mat3& sigma() const { return sigma_; }
  const Mat3& whitening() const { return whitening_; }
  const TriangleBvh& whitened_bvh() const { return bvh_; }

 private:
  TriangleMesh mesh_;
  Mat3 sigma_;
  Mat3 whitening_;
  TriangleBvh bvh_;
};

struct Correspondence {
  int data_index = -1;
  OrientedPoint y;  // matched point on the deformed model
  BarycentricLocation loc;
  bool outlier = false;
  double sq_mahalanobis = 0.0;
  double angular_error = 0.0;  // radians between y_n and R x_n
  double nll = 0.0;
};

/// Surface point minimising the match negative log-likelihood for x under T.
/// Within each triangle the position term is minimised exactly (closest
/// point in whitened space) and the orientation term is evaluated at the
/// interpolated normal there.
Correspondence find_most_likely_match(int data_index, const OrientedPoint& x,
                                      const MatchSurface& surface, const KentParameters& kent,
                                      const SimilarityTransform& t);

/// Scan over every triangle; reference for the BVH search.
Correspondence find_most_likely_match_brute_force(int data_index, const OrientedPoint& x,
                                                  const MatchSurface& surface,
                                                  const KentParameters& kent,
                                                  const SimilarityTransform& t);

/// Matches every data point. Results are in data order and identical for
/// both execution modes.
std::vector<Correspondence> match_all(std::span<const OrientedPoint> data,
                                      const MatchSurface& surface, const KentParameters& kent,
                                      const SimilarityTransform& t,
                                      Execution exec = Execution::Parallel);

}  // namespace ssmreg
