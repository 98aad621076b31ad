// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/outliers.hpp"

#include <algorithm>
#include <numbers>

#include "ssmreg/chi2.hpp"
#include "ssmreg/error.hpp"
#include "ssmreg/noise.hpp"

namespace ssmreg {

OutlierSummary reject_outliers(std::vector<Correspondence>& corrs, double p) {
  if (corrs.empty()) throw DegenerateRegistration("no correspondences to test");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("outlier probability must lie in (0, 1)");
  OutlierSummary summary;
  const double limit = chi2_inv(p, 3.0);

  std::vector<double> angles;
  angles.reserve(corrs.size());
  for (Correspondence& c : corrs) {
    c.outlier = c.sq_mahalanobis > limit;
    if (c.outlier) {
      ++summary.position_rejected;
    } else {
      angles.push_back(c.angular_error);
    }
  }
  if (angles.empty()) {
    throw DegenerateRegistration("every match failed the position test");
  }

  summary.sigma_circ = circular_sd(angles);
  summary.angle_threshold =
      std::clamp(3.0 * summary.sigma_circ, kMinAngularThreshold, std::numbers::pi);
  for (Correspondence& c : corrs) {
    if (c.outlier) continue;
    if (c.angular_error > summary.angle_threshold) {
      c.outlier = true;
      ++summary.orientation_rejected;
    } else {
      ++summary.inliers;
    }
  }
  if (summary.inliers == 0) {
    throw DegenerateRegistration("every match failed the orientation test");
  }
  return summary;
}

}  // namespace ssmreg
