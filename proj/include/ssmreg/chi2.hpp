// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace ssmreg {

/// Regularized lower incomplete gamma function P(a, x).
double regularized_gamma_p(double a, double x);

/// CDF of the chi-square distribution with k degrees of freedom.
double chi2_cdf(double x, double k);

/// Inverse chi-square CDF. Safeguarded Newton iteration on P(k/2, x/2),
/// seeded by the Wilson-Hilferty approximation. Accurate to 1e-10
/// absolute for k <= 100 and 1e-12 relative above.
double chi2_inv(double p, double k);

/// Standard normal quantile, used for seeding.
double normal_quantile(double p);

}  // namespace ssmreg
