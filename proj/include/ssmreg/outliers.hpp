// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ssmreg/correspondence.hpp"

namespace ssmreg {

/// Lower limit on the angular rejection threshold (radians). Keeps exact
/// matches from being rejected over rounding-level angles when the circular
/// SD collapses to zero.
inline constexpr double kMinAngularThreshold = 1e-6;

struct OutlierSummary {
  int inliers = 0;
  int position_rejected = 0;
  int orientation_rejected = 0;
  double sigma_circ = 0.0;       // over position-test survivors
  double angle_threshold = 0.0;  // 3 sigma_circ, clamped to [kMinAngularThreshold, pi]
};

/// Two-stage rejection over one correspondence phase; flags are reset first.
/// Stage 1 rejects sq_mahalanobis > chi2_inv(p, 3). Stage 2 computes the
/// circular SD of the survivors' angular errors and rejects those beyond
/// three of it. Throws DegenerateRegistration when nothing survives.
OutlierSummary reject_outliers(std::vector<Correspondence>& corrs, double p);

}  // namespace ssmreg
