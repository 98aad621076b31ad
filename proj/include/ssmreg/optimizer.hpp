// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

namespace ssmreg {

/// Returns f(x) and writes the gradient into the second argument when it is
/// non-null.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>;

struct BoxBfgsOptions {
  int max_iterations = 200;
  int max_backtracks = 40;
  double armijo = 1e-4;
  /// Stop when the predicted decrease -g.d falls below this times max(1, |f|).
  double stationarity = 1e-12;
  /// Stop when an accepted step lowers f by less than this times max(1, |f|).
  double relative_decrease = 1e-14;
};

struct BoxBfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string status;
};

/// Quasi-Newton minimisation under box constraints: BFGS on the inverse
/// Hessian restricted to the free variables, with variables pinned at a bound
/// (gradient pointing outward) held fixed, and a projected Armijo
/// backtracking line search. Accepted steps never increase f. Use +-inf for
/// unbounded variables and lower == upper to freeze one. `inverse_diagonal`
/// seeds and resets the inverse Hessian.
///
/// Throws NumericalError if the very first step cannot decrease f although
/// the predicted decrease is above tolerance.
BoxBfgsResult minimize_box_bfgs(const Objective& f, Eigen::VectorXd x0,
                                const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                const Eigen::VectorXd& inverse_diagonal,
                                const BoxBfgsOptions& options = {});

}  // namespace ssmreg
